#pragma once

// Shared fixtures, generators and brute-force oracles for the test suites.
// Nothing here calls into the alignment code it is used to check.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kvext/align.hpp"
#include "kvext/corpus.hpp"
#include "kvext/eval_pair.hpp"
#include "kvext/transcript.hpp"

namespace kvext::testing {

// One marriage record in the three annotation regimes.
inline const std::string kRecordHtr =
    "dit dia rebere de Jua Oliveres pages de Llissa demunt viudo ab Maria donsella filla de Juan Pruna pages del "
    "far y de Beneta";
inline const std::string kRecordHtrNer =
    "dit dia rebere de <N-H>Jua <SN-H>Oliveres <O-H>pages de <L-H>Llissa demunt <S-H>viudo ab <N-W>Maria "
    "<S-W>donsella filla de <N-WF>Juan <SN-WF>Pruna <O-WF>pages del <L-WF>far y de <N-WM>Beneta";
inline const std::string kRecordKeyValue =
    "<N-H>Jua <SN-H>Oliveres <O-H>pages <L-H>Llissa <S-H>viudo <N-W>Maria <S-W>donsella <N-WF>Juan <SN-WF>Pruna "
    "<O-WF>pages <L-WF>far <N-WM>Beneta";

/// Category x person scheme used for marriage-record style data.
TagVocabulary esposalles_vocab(ScopeMode scope = ScopeMode::SingleWord);
/// Census-table column labels.
TagVocabulary popp_vocab();
/// Modern-English entity types.
TagVocabulary iam_vocab(ScopeMode scope = ScopeMode::SingleWord);

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);  // inclusive
bool chance(Rng& rng, double p);

/// Random word over a small alphabet that includes precomposed accents.
std::string random_word(Rng& rng, std::size_t max_len = 8);

/// Random valid transcript over the vocabulary's labels.
TaggedTranscript random_transcript(Rng& rng, const TagVocabulary& vocab, std::size_t max_words = 12,
                                   double tag_rate = 0.4);

/// A corrupted copy of `ref`: character edits, dropped/inserted words,
/// dropped tags and relabelled tags.
TaggedTranscript noisy_copy(Rng& rng, const TaggedTranscript& ref, const TagVocabulary& vocab, double rate = 0.15);

std::vector<EvalPair> random_pairs(Rng& rng, const TagVocabulary& vocab, std::size_t documents, bool noisy,
                                   std::size_t max_words = 12);

// ---------------------------------------------------------------------------
// Oracles

/// Plain exponential recursion on the Levenshtein definition.
std::size_t brute_force_distance(std::u32string_view a, std::u32string_view b);

/// Memoized recursion on suffixes; fine up to a few dozen symbols.
std::size_t memo_distance(std::u32string_view a, std::u32string_view b);

/// Full DP matrix, rows = ref prefix length, columns = hyp prefix length.
std::vector<std::vector<std::size_t>> dp_matrix(std::u32string_view hyp, std::u32string_view ref);

/// Walks a DP matrix back from the corner with the documented tie-break
/// (Match, Substitute, Delete, Insert) and returns the ops in order.
std::vector<EditOp> tie_break_path(const std::vector<std::vector<std::size_t>>& d, std::u32string_view hyp,
                                   std::u32string_view ref);

/// Replays an edit script on `ref` and returns the text it produces, or
/// nullopt if the script is inconsistent (bad indices, coverage, or
/// a Match between different symbols).
std::optional<std::u32string> replay(const AlignmentPath& path, std::u32string_view hyp, std::u32string_view ref);

// ---------------------------------------------------------------------------
// Split statistics fixtures

struct SplitShape {
  std::size_t pages = 0;
  std::size_t records = 0;  // 0 = no record level
  std::size_t lines = 0;
  std::size_t words = 0;
  std::size_t entities = 0;
  /// label -> count; must sum to `entities`.
  std::vector<std::pair<std::string, std::size_t>> labels;
};

/// Builds pages (and records) with line children so that the corpus has
/// exactly the given counts per split.
Corpus build_split_corpus(const std::array<SplitShape, 3>& splits, std::uint64_t seed);

struct DatasetCounts {
  std::array<SplitShape, 3> splits;
};

DatasetCounts popp_counts();
DatasetCounts iam_counts();
DatasetCounts esposalles_counts();

}  // namespace kvext::testing
