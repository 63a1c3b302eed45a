#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "kvext/transcript.hpp"

namespace kvext {

/// The three annotation regimes a transcript can be derived into.
enum class Regime { Htr, HtrNer, KeyValue };

std::string_view to_string(Regime regime) noexcept;
/// Accepts "htr", "htr-ner" and "key-value" (underscores also accepted).
Regime parse_regime(std::string_view text);

/// Removes every tag token.
TaggedTranscript strip_tags(const TaggedTranscript& t);

struct KeyValueOptions {
  /// When set, the (tag, words) units are emitted in a seeded random order
  /// instead of reading order.
  std::optional<std::uint64_t> shuffle_seed;
};

/// Keeps the tags and the words in their scope, dropping everything else.
TaggedTranscript to_key_value(const TaggedTranscript& t, const TagVocabulary& vocab,
                              const KeyValueOptions& options = {});

/// Derives the transcript for `regime` from an HTR+NER transcript.
TaggedTranscript to_regime(const TaggedTranscript& t, Regime regime, const TagVocabulary& vocab,
                           const KeyValueOptions& options = {});

TagLabel combine_labels(std::string_view category, std::string_view person, const TagVocabulary& vocab);
std::pair<std::string, std::string> split_labels(const TagLabel& label, const TagVocabulary& vocab);

/// Which half of a composite label to keep when relabelling.
enum class LabelAxis { Full, Category, Person };

std::string_view to_string(LabelAxis axis) noexcept;
LabelAxis parse_label_axis(std::string_view text);

/// Replaces each composite label by one of its components. Full is identity.
TaggedTranscript relabel(const TaggedTranscript& t, LabelAxis axis, const TagVocabulary& vocab);

struct ConcatSeparator {
  /// Empty means plain space joining; otherwise this word is inserted
  /// between consecutive parts.
  std::string line_break_token;

  static ConcatSeparator space() { return {}; }
  static ConcatSeparator line_break(std::string token) { return {std::move(token)}; }
};

/// Joins line transcripts into a record or page. Every tag in `parts` must
/// belong to `vocab`.
TaggedTranscript concat(std::span<const TaggedTranscript> parts, const ConcatSeparator& separator,
                        Level level, const TagVocabulary& vocab);

}  // namespace kvext
