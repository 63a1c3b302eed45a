#include "kvext/error.hpp"

namespace kvext {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnknownTag: return "UnknownTag";
    case ErrorKind::MalformedTag: return "MalformedTag";
    case ErrorKind::ScopeViolation: return "ScopeViolation";
    case ErrorKind::InvalidVocabulary: return "InvalidVocabulary";
    case ErrorKind::UnknownComponent: return "UnknownComponent";
    case ErrorKind::NotComposite: return "NotComposite";
    case ErrorKind::MixedVocabulary: return "MixedVocabulary";
    case ErrorKind::SpanOutOfBounds: return "SpanOutOfBounds";
    case ErrorKind::InputTooLarge: return "InputTooLarge";
    case ErrorKind::EmptyReference: return "EmptyReference";
    case ErrorKind::InvalidUtf8: return "InvalidUtf8";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Malformed: return "Malformed";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::ColumnCountMismatch: return "ColumnCountMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorKind kind, const std::string& detail,
                           std::optional<std::size_t> line) {
  std::string msg(to_string(kind));
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  if (line) {
    msg += " (line " + std::to_string(*line) + ")";
  }
  return msg;
}

}  // namespace

Error::Error(ErrorKind kind, std::string detail, std::optional<std::size_t> line)
    : std::runtime_error(format_message(kind, detail, line)),
      kind_(kind),
      detail_(std::move(detail)),
      line_(line) {}

}  // namespace kvext
