#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kvext/eval_pair.hpp"
#include "kvext/transcript.hpp"

namespace kvext {

/// Score of one reference entity word. Scores are percentages; a word
/// without a paired hypothesis word scores 0.
struct IehhrWord {
  std::string doc_id;
  std::string ref_word;
  std::string ref_label;
  std::optional<std::string> hyp_word;
  std::optional<std::string> hyp_label;
  bool category_ok = false;
  bool person_ok = false;
  double word_cer = 100.0;
  double basic_score = 0.0;
  double complete_score = 0.0;
};

/// basic / complete are means over all reference entity words. With no
/// reference entity words both are 0 and `words` is 0.
struct IehhrReport {
  double basic = 0.0;
  double complete = 0.0;
  std::size_t words = 0;
  std::size_t documents = 0;
  std::vector<IehhrWord> per_word;
  std::vector<std::string> missing_ids;
};

/// Entity words are paired by a longest common subsequence over their full
/// labels; the remaining words between consecutive LCS pairs are then paired
/// in order. Requires a composite vocabulary (Error(NotComposite)).
IehhrReport iehhr_score(const TaggedTranscript& hyp, const TaggedTranscript& ref, const TagVocabulary& vocab);

/// Pools the word scores of every document. A missing prediction scores all
/// of that document's entity words 0.
IehhrReport corpus_iehhr(std::span<const EvalPair> pairs, const TagVocabulary& vocab, unsigned jobs = 1);

}  // namespace kvext
