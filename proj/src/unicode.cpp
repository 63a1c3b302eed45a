#include "kvext/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "kvext/error.hpp"

namespace kvext::unicode {

namespace {

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw Error(ErrorKind::InvalidArgument, "ICU NFC normalizer unavailable");
  }
  return *n;
}

bool is_ascii(std::string_view s) noexcept {
  for (unsigned char c : s) {
    if (c >= 0x80) return false;
  }
  return true;
}

}  // namespace

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    const int32_t at = i;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      throw Error(ErrorKind::InvalidUtf8, "byte offset " + std::to_string(at));
    }
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
      throw Error(ErrorKind::InvalidUtf8, "unencodable scalar value");
    }
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::string nfc(std::string_view utf8) {
  // ASCII is always NFC and always well-formed.
  if (is_ascii(utf8)) return std::string(utf8);
  // Validate first; ICU silently substitutes U+FFFD for bad sequences.
  (void)decode(utf8);
  const auto& normalizer = nfc_instance();
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  if (normalizer.quickCheck(u, status) == UNORM_YES && U_SUCCESS(status)) {
    return std::string(utf8);
  }
  status = U_ZERO_ERROR;
  icu::UnicodeString normalized = normalizer.normalize(u, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorKind::InvalidUtf8, "normalization failed");
  }
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool is_space(char32_t c) noexcept {
  return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0;
}

}  // namespace kvext::unicode
