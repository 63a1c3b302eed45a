#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kvext/eval_pair.hpp"
#include "kvext/transcript.hpp"

namespace kvext {

/// Character and word error rates in percent. Tags are ignored; characters
/// are those of the tag-free text with single spaces between words.
struct HtrReport {
  double cer = 0.0;
  double wer = 0.0;
  std::size_t char_errors = 0;
  std::size_t char_total = 0;
  std::size_t word_errors = 0;
  std::size_t word_total = 0;
  std::size_t documents = 0;
  std::vector<std::string> missing_ids;
};

/// Throws Error(EmptyReference) when the reference has no text.
HtrReport htr_score(const TaggedTranscript& hyp, const TaggedTranscript& ref);
double cer(const TaggedTranscript& hyp, const TaggedTranscript& ref);
double wer(const TaggedTranscript& hyp, const TaggedTranscript& ref);

/// Micro-averaged over the corpus: errors and totals are pooled before
/// dividing. A missing prediction is scored as an empty hypothesis and its id
/// reported. Error(EmptyReference) carries the offending document id.
HtrReport corpus_htr(std::span<const EvalPair> pairs, unsigned jobs = 1);

}  // namespace kvext
