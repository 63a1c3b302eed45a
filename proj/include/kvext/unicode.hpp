#pragma once

#include <string>
#include <string_view>

namespace kvext::unicode {

/// NFC-normalizes UTF-8 text. Throws Error(InvalidUtf8) on ill-formed input.
std::string nfc(std::string_view utf8);

/// Decodes UTF-8 into scalar values without normalizing.
std::u32string decode(std::string_view utf8);

std::string encode(std::u32string_view text);

bool is_space(char32_t c) noexcept;

}  // namespace kvext::unicode
