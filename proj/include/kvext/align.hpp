#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kvext {

enum class EditKind { Match, Substitute, Insert, Delete };

std::string_view to_string(EditKind kind) noexcept;

/// One step of an edit script turning the reference into the hypothesis.
/// Insert carries only hyp_index, Delete only ref_index.
struct EditOp {
  EditKind kind = EditKind::Match;
  std::optional<std::size_t> hyp_index;
  std::optional<std::size_t> ref_index;

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

struct AlignmentPath {
  std::vector<EditOp> ops;
  std::size_t cost = 0;
  std::size_t hyp_length = 0;
  std::size_t ref_length = 0;
};

/// Half-open range [begin, end) of character (or word) positions.
struct CharRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool empty() const noexcept { return begin == end; }
  std::size_t size() const noexcept { return end - begin; }
  /// Empty ranges overlap nothing.
  bool overlaps(const CharRange& other) const noexcept {
    return !empty() && !other.empty() && begin < other.end && other.begin < end;
  }
  friend bool operator==(const CharRange&, const CharRange&) = default;
};

/// Largest input (per side, in symbols) accepted by align_chars. The full
/// backtrace keeps two bits per DP cell.
inline constexpr std::size_t kMaxAlignLength = 20000;

/// Unit-cost Levenshtein distance. Bit-parallel (Myers/Hyyrö), linear memory,
/// so inputs of 10^5 symbols per side are fine.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

/// UTF-8 overload: both sides are NFC-normalized and compared by scalar value.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Distance over word sequences, each word one symbol.
std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b);

/// Minimum-cost character alignment of `hyp` against `ref`. Ties in the
/// backtrace (walked from the end) prefer Match, then Substitute, then
/// Delete, then Insert. Throws Error(InputTooLarge) beyond kMaxAlignLength.
AlignmentPath align_chars(std::u32string_view hyp, std::u32string_view ref);
AlignmentPath align_chars(std::string_view hyp, std::string_view ref);

/// Maps a reference range onto the hypothesis through an alignment. A range
/// with no surviving characters maps to an empty range at its insertion
/// point. Throws Error(SpanOutOfBounds).
CharRange project_span(const AlignmentPath& path, CharRange ref_span);

/// Precomputed lookup for projecting many spans through one alignment.
class SpanProjector {
 public:
  explicit SpanProjector(const AlignmentPath& path);
  CharRange project(CharRange ref_span) const;

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> hyp_at_;      // hyp index aligned to each ref position, or kNone
  std::vector<std::size_t> hyp_before_;  // hyp symbols consumed before each ref position
};

}  // namespace kvext
