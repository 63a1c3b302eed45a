#include "kvext/transforms.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "kvext/error.hpp"

namespace kvext {

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::Htr: return "htr";
    case Regime::HtrNer: return "htr-ner";
    case Regime::KeyValue: return "key-value";
  }
  return "htr-ner";
}

Regime parse_regime(std::string_view text) {
  if (text == "htr") return Regime::Htr;
  if (text == "htr-ner" || text == "htr_ner") return Regime::HtrNer;
  if (text == "key-value" || text == "key_value") return Regime::KeyValue;
  throw Error(ErrorKind::InvalidArgument, "unknown regime '" + std::string(text) + "'");
}

std::string_view to_string(LabelAxis axis) noexcept {
  switch (axis) {
    case LabelAxis::Full: return "full";
    case LabelAxis::Category: return "category";
    case LabelAxis::Person: return "person";
  }
  return "full";
}

LabelAxis parse_label_axis(std::string_view text) {
  if (text == "full") return LabelAxis::Full;
  if (text == "category") return LabelAxis::Category;
  if (text == "person") return LabelAxis::Person;
  throw Error(ErrorKind::InvalidArgument, "unknown axis '" + std::string(text) + "'");
}

TaggedTranscript strip_tags(const TaggedTranscript& t) {
  std::vector<Token> tokens;
  tokens.reserve(t.size());
  for (const auto& token : t.tokens()) {
    if (std::holds_alternative<Word>(token)) tokens.push_back(token);
  }
  return TaggedTranscript(std::move(tokens), t.level());
}

TaggedTranscript to_key_value(const TaggedTranscript& t, const TagVocabulary& vocab,
                              const KeyValueOptions& options) {
  // Each unit is one tag plus the words in its scope.
  std::vector<std::vector<Token>> units;
  bool in_scope = false;
  for (const auto& token : t.tokens()) {
    if (std::holds_alternative<Tag>(token)) {
      units.push_back({token});
      in_scope = true;
    } else if (in_scope) {
      units.back().push_back(token);
      if (vocab.scope_mode() == ScopeMode::SingleWord) in_scope = false;
    }
  }

  if (options.shuffle_seed) {
    std::mt19937_64 rng(*options.shuffle_seed);
    for (std::size_t i = units.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng() % i);
      std::swap(units[i - 1], units[j]);
    }
  }

  std::vector<Token> tokens;
  for (auto& unit : units) {
    for (auto& token : unit) tokens.push_back(std::move(token));
  }
  return TaggedTranscript(std::move(tokens), t.level());
}

TaggedTranscript to_regime(const TaggedTranscript& t, Regime regime, const TagVocabulary& vocab,
                           const KeyValueOptions& options) {
  switch (regime) {
    case Regime::Htr: return strip_tags(t);
    case Regime::HtrNer: return t;
    case Regime::KeyValue: return to_key_value(t, vocab, options);
  }
  return t;
}

TagLabel combine_labels(std::string_view category, std::string_view person, const TagVocabulary& vocab) {
  if (!vocab.is_composite()) throw Error(ErrorKind::NotComposite, "vocabulary has no category x person scheme");
  const auto& scheme = *vocab.scheme();
  auto known = [](const std::vector<std::string>& list, std::string_view part) {
    return std::find(list.begin(), list.end(), part) != list.end();
  };
  if (!known(scheme.categories, category)) {
    throw Error(ErrorKind::UnknownComponent, "category '" + std::string(category) + "'");
  }
  if (!known(scheme.persons, person)) {
    throw Error(ErrorKind::UnknownComponent, "person '" + std::string(person) + "'");
  }
  const std::string raw = std::string(category) + scheme.separator + std::string(person);
  auto label = vocab.find(raw);
  if (!label) throw Error(ErrorKind::UnknownComponent, "combination '" + raw + "' not allowed");
  return *std::move(label);
}

std::pair<std::string, std::string> split_labels(const TagLabel& label, const TagVocabulary& vocab) {
  if (!vocab.is_composite()) throw Error(ErrorKind::NotComposite, "vocabulary has no category x person scheme");
  auto resolved = vocab.find(label.raw());
  if (!resolved || !resolved->parts()) throw Error(ErrorKind::NotComposite, "label '" + label.raw() + "'");
  return {resolved->parts()->category, resolved->parts()->person};
}

TaggedTranscript relabel(const TaggedTranscript& t, LabelAxis axis, const TagVocabulary& vocab) {
  if (axis == LabelAxis::Full) return t;
  std::vector<Token> tokens;
  tokens.reserve(t.size());
  for (const auto& token : t.tokens()) {
    if (const auto* tag = std::get_if<Tag>(&token)) {
      auto [category, person] = split_labels(tag->label, vocab);
      tokens.emplace_back(Tag{TagLabel(axis == LabelAxis::Category ? category : person)});
    } else {
      tokens.push_back(token);
    }
  }
  return TaggedTranscript(std::move(tokens), t.level());
}

TaggedTranscript concat(std::span<const TaggedTranscript> parts, const ConcatSeparator& separator,
                        Level level, const TagVocabulary& vocab) {
  const bool with_break = !separator.line_break_token.empty();
  if (with_break) {
    const auto& tok = separator.line_break_token;
    if (tok.find(vocab.open_delim()) != std::string::npos || tok.find(vocab.close_delim()) != std::string::npos) {
      throw Error(ErrorKind::InvalidArgument, "line-break token contains a tag delimiter");
    }
  }

  std::vector<Token> tokens;
  bool first = true;
  for (const auto& part : parts) {
    for (const auto& token : part.tokens()) {
      if (const auto* tag = std::get_if<Tag>(&token); tag && !vocab.contains(tag->label.raw())) {
        throw Error(ErrorKind::MixedVocabulary, tag->label.raw());
      }
    }
    if (part.empty()) continue;
    if (with_break && !first) tokens.emplace_back(Word{separator.line_break_token});
    tokens.insert(tokens.end(), part.tokens().begin(), part.tokens().end());
    first = false;
  }
  // The constructor validates the line-break word.
  return TaggedTranscript(std::move(tokens), level);
}

}  // namespace kvext
