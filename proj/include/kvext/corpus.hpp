#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kvext/eval_pair.hpp"
#include "kvext/transcript.hpp"
#include "kvext/transforms.hpp"

namespace kvext {

enum class Split { Train, Validation, Test };

inline constexpr std::array<Split, 3> kAllSplits = {Split::Train, Split::Validation, Split::Test};

std::string_view to_string(Split split) noexcept;
Split parse_split(std::string_view text);

struct CorpusRecord {
  std::string id;
  Split split = Split::Test;
  Level level = Level::Line;
  TaggedTranscript transcript;
  std::optional<std::string> parent_id;
};

using Corpus = std::vector<CorpusRecord>;

/// JSON Lines, one object per line:
///   {"id": ..., "split": "train|validation|test", "level": "line|record|page",
///    "text": "<tagged text>", "parent_id": ...}
/// "split" defaults to "test" and "level" to "line". Blank lines are skipped.
/// Errors carry the 1-based line number.
Corpus read_corpus(std::istream& in, const TagVocabulary& vocab);
Corpus load_corpus(const std::filesystem::path& path, const TagVocabulary& vocab);

/// Stable key order: id, split, level, text, parent_id.
void write_corpus(std::ostream& out, const Corpus& corpus, const TagVocabulary& vocab);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus, const TagVocabulary& vocab);

/// Checks that every present parent is strictly coarser than its child and
/// that a non-empty parent text equals the space-joined text of its children.
/// Throws Error(Malformed) naming the offending id.
void validate_linkage(const Corpus& corpus, const TagVocabulary& vocab);

/// Replaces every parent that has children in the corpus by the
/// concatenation of its (recursively assembled) children, and drops the
/// children.
Corpus assemble_by_parent(const Corpus& corpus, const TagVocabulary& vocab,
                          const ConcatSeparator& separator = ConcatSeparator::space());

struct ColumnarOptions {
  char delimiter = '\t';
  bool header = false;  // skip the first row
  std::string id_prefix = "row";
  Split split = Split::Test;
  Level level = Level::Line;
};

/// One record per table row; each non-empty cell becomes
/// "<column label>word word ...". Quoted cells ("a, b" with "" escapes) are
/// supported. Throws Error(ColumnCountMismatch) with the row number.
Corpus read_columnar(std::istream& in, std::span<const std::string> column_labels, const ColumnarOptions& options = {});
Corpus import_columnar(const std::filesystem::path& path, std::span<const std::string> column_labels,
                       const ColumnarOptions& options = {});

struct SplitCounts {
  std::size_t pages = 0;
  std::size_t records = 0;
  std::size_t lines = 0;
  std::size_t words = 0;
  std::size_t entities = 0;
  std::map<std::string, std::size_t> per_label;

  friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

struct SplitStats {
  std::array<SplitCounts, 3> splits;
  bool has_records = false;

  const SplitCounts& operator[](Split s) const { return splits[static_cast<std::size_t>(s)]; }
  SplitCounts& operator[](Split s) { return splits[static_cast<std::size_t>(s)]; }
};

/// Pages, records and lines count the records of each level. Words and
/// entities (tag tokens) are counted on records that have no children in
/// the corpus, so a page and its lines are not counted twice.
SplitStats stats(const Corpus& corpus);

struct PairedCorpus {
  std::vector<EvalPair> pairs;           // reference order
  std::vector<std::string> missing_ids;  // references without a prediction
  std::vector<std::string> unexpected_ids;  // predictions without a reference
};

PairedCorpus pair_by_id(const Corpus& refs, const Corpus& hyps);

}  // namespace kvext
