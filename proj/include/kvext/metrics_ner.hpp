#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kvext/align.hpp"
#include "kvext/eval_pair.hpp"
#include "kvext/transcript.hpp"
#include "kvext/transforms.hpp"

namespace kvext {

struct EntitySpan {
  TagLabel label;
  CharRange word_range;
  CharRange char_range;  // in scalar values of PlainTranscript::text
};

/// Tag-free text plus the entity spans that the tags defined.
struct PlainTranscript {
  std::string text;
  std::u32string chars;
  std::vector<std::string> words;
  std::vector<EntitySpan> spans;
};

PlainTranscript extract_spans(const TaggedTranscript& t, const TagVocabulary& vocab);

struct EntityMatch {
  std::size_t ref_span = 0;  // index into ref.spans
  std::size_t hyp_span = 0;  // index into hyp.spans
  std::size_t distance = 0;  // edit distance between the two span texts
};

inline constexpr double kDefaultMatchThreshold = 0.30;

/// Aligns hyp and ref at character level and pairs entities: a hyp span is a
/// candidate for a ref span when labels are equal and it overlaps the
/// projection of the ref span; it matches when
/// distance / ref span length < threshold. Ref spans are resolved greedily
/// in reading order, taking the first passing unused candidate.
std::vector<EntityMatch> match_entities(const PlainTranscript& hyp, const PlainTranscript& ref,
                                        double threshold = kDefaultMatchThreshold);

struct LabelScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t matched = 0;
  std::size_t predicted = 0;
  std::size_t expected = 0;
  bool precision_defined = false;  // false when nothing was predicted
  bool recall_defined = false;     // false when nothing was expected
};

LabelScore make_label_score(std::size_t matched, std::size_t predicted, std::size_t expected);

struct NerReport {
  std::map<std::string, LabelScore> per_label;
  LabelScore overall;
  std::size_t documents = 0;
  std::vector<std::string> missing_ids;
};

struct NerOptions {
  double threshold = kDefaultMatchThreshold;
  LabelAxis axis = LabelAxis::Full;
  unsigned jobs = 1;
};

/// Pooled entity precision/recall/F1. A missing prediction counts its
/// reference entities as unmatched and is listed in missing_ids.
NerReport ner_evaluate(std::span<const EvalPair> pairs, const TagVocabulary& vocab, const NerOptions& options = {});

}  // namespace kvext
