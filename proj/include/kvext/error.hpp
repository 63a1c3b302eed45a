#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kvext {

enum class ErrorKind {
  UnknownTag,
  MalformedTag,
  ScopeViolation,
  InvalidVocabulary,
  UnknownComponent,
  NotComposite,
  MixedVocabulary,
  SpanOutOfBounds,
  InputTooLarge,
  EmptyReference,
  InvalidUtf8,
  Io,
  Malformed,
  DuplicateId,
  ColumnCountMismatch,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure in the library is reported through this type. `detail`
/// carries the offending value (a label, an id, a path); `line` is set for
/// diagnostics that come from a file.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string detail, std::optional<std::size_t> line = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

  Error at_line(std::size_t line) const { return Error(kind_, detail_, line); }

 private:
  ErrorKind kind_;
  std::string detail_;
  std::optional<std::size_t> line_;
};

}  // namespace kvext
