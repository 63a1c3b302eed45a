#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace kvext {

/// How many following words an inline tag covers.
enum class ScopeMode { SingleWord, UntilNextTag };

enum class Level { Line, Record, Page };

std::string_view to_string(ScopeMode mode) noexcept;
std::string_view to_string(Level level) noexcept;
/// Accepts both "single_word" and "single-word" spellings.
ScopeMode parse_scope_mode(std::string_view text);
Level parse_level(std::string_view text);

struct LabelParts {
  std::string category;
  std::string person;

  friend bool operator==(const LabelParts&, const LabelParts&) = default;
};

/// An entity label as written between the tag delimiters, e.g. "N-H".
/// Equality and ordering only look at the raw text.
class TagLabel {
 public:
  explicit TagLabel(std::string raw, std::optional<LabelParts> parts = std::nullopt);

  const std::string& raw() const noexcept { return raw_; }
  const std::optional<LabelParts>& parts() const noexcept { return parts_; }

  friend bool operator==(const TagLabel& a, const TagLabel& b) noexcept { return a.raw_ == b.raw_; }
  friend std::strong_ordering operator<=>(const TagLabel& a, const TagLabel& b) noexcept {
    return a.raw_ <=> b.raw_;
  }

 private:
  std::string raw_;
  std::optional<LabelParts> parts_;
};

/// Category x person label scheme; labels are `category + separator + person`.
struct CompositeScheme {
  std::vector<std::string> categories;
  std::vector<std::string> persons;
  std::string separator = "-";
};

class TagVocabulary {
 public:
  static TagVocabulary flat(std::vector<std::string> labels, ScopeMode scope = ScopeMode::SingleWord);

  /// Cross product of categories and persons, optionally restricted to
  /// `allowed` (which must be a subset of the product).
  static TagVocabulary composite(CompositeScheme scheme, ScopeMode scope = ScopeMode::SingleWord,
                                 std::optional<std::vector<std::string>> allowed = std::nullopt);

  /// Accepts any syntactically valid label. Used when a caller evaluates
  /// text without a configured label set.
  static TagVocabulary permissive(ScopeMode scope = ScopeMode::SingleWord);

  TagVocabulary with_scope(ScopeMode scope) const;
  TagVocabulary with_delimiters(std::string open, std::string close) const;

  /// Resolves a raw label, filling composite parts when applicable.
  std::optional<TagLabel> find(std::string_view raw) const;
  bool contains(std::string_view raw) const { return find(raw).has_value(); }

  const std::vector<TagLabel>& labels() const noexcept { return labels_; }
  ScopeMode scope_mode() const noexcept { return scope_; }
  bool is_composite() const noexcept { return scheme_.has_value(); }
  bool is_permissive() const noexcept { return permissive_; }
  const std::optional<CompositeScheme>& scheme() const noexcept { return scheme_; }
  const std::string& open_delim() const noexcept { return open_; }
  const std::string& close_delim() const noexcept { return close_; }

 private:
  TagVocabulary() = default;
  void add_label(TagLabel label);
  void check_label_syntax(std::string_view raw) const;

  std::vector<TagLabel> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  ScopeMode scope_ = ScopeMode::SingleWord;
  std::optional<CompositeScheme> scheme_;
  bool permissive_ = false;
  std::string open_ = "<";
  std::string close_ = ">";
};

/// Parses the vocabulary config format:
///   {"labels": [...], "scope_mode": "single_word"}
///   {"categories": [...], "persons": [...], "separator": "-", "allow": [...]}
/// plus optional "open_delim" / "close_delim".
TagVocabulary vocabulary_from_json(std::string_view json_text);
TagVocabulary load_vocabulary(const std::filesystem::path& path);
std::string vocabulary_to_json(const TagVocabulary& vocab);

struct Word {
  std::string text;
  friend bool operator==(const Word&, const Word&) = default;
};

struct Tag {
  TagLabel label;
  friend bool operator==(const Tag&, const Tag&) = default;
};

using Token = std::variant<Word, Tag>;

/// Ordered words and entity tags for one line, record or page. Every tag is
/// immediately followed by a word; the constructor enforces it.
class TaggedTranscript {
 public:
  TaggedTranscript() = default;
  explicit TaggedTranscript(std::vector<Token> tokens, Level level = Level::Line);

  const std::vector<Token>& tokens() const noexcept { return tokens_; }
  Level level() const noexcept { return level_; }
  bool empty() const noexcept { return tokens_.empty(); }
  std::size_t size() const noexcept { return tokens_.size(); }

  TaggedTranscript with_level(Level level) const;

  friend bool operator==(const TaggedTranscript&, const TaggedTranscript&) = default;

 private:
  std::vector<Token> tokens_;
  Level level_ = Level::Line;
};

/// Parses inline-tag text such as "dit <N-W>Maria <S-W>donsella". Input is
/// NFC-normalized first. A tag separated from its word by whitespace is
/// accepted and re-attached on serialization.
TaggedTranscript parse_tagged(std::string_view text, const TagVocabulary& vocab,
                              Level level = Level::Line);

std::string serialize(const TaggedTranscript& t, const TagVocabulary& vocab);
/// Serializes with the default "<" ">" delimiters.
std::string serialize(const TaggedTranscript& t);

std::vector<std::string> words_of(const TaggedTranscript& t);
std::vector<TagLabel> tags_of(const TaggedTranscript& t);

/// Checks labels against the vocabulary and that no word contains a delimiter.
void validate(const TaggedTranscript& t, const TagVocabulary& vocab);

}  // namespace kvext
