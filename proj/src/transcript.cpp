#include "kvext/transcript.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kvext/error.hpp"
#include "kvext/unicode.hpp"

namespace kvext {

namespace {

bool contains_space(std::string_view s) {
  bool ascii = true;
  for (unsigned char c : s) {
    if (c >= 0x80) {
      ascii = false;
      continue;
    }
    if (unicode::is_space(c)) return true;
  }
  if (ascii) return false;
  for (char32_t c : unicode::decode(s)) {
    if (unicode::is_space(c)) return true;
  }
  return false;
}

// Splits on Unicode White_Space, returning views into `text`.
std::vector<std::string_view> split_units(std::string_view text) {
  std::vector<std::string_view> units;
  std::size_t start = std::string_view::npos;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    char32_t c = lead;
    if (lead >= 0x80) {
      len = lead >= 0xF0 ? 4 : lead >= 0xE0 ? 3 : 2;
      len = std::min(len, text.size() - i);
      auto decoded = unicode::decode(text.substr(i, len));
      c = decoded.empty() ? 0 : decoded.front();
    }
    if (unicode::is_space(c)) {
      if (start != std::string_view::npos) {
        units.push_back(text.substr(start, i - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = i;
    }
    i += len;
  }
  if (start != std::string_view::npos) units.push_back(text.substr(start));
  return units;
}

std::string quote_text(std::string_view s) { return "'" + std::string(s) + "'"; }

}  // namespace

std::string_view to_string(ScopeMode mode) noexcept {
  return mode == ScopeMode::SingleWord ? "single_word" : "until_next_tag";
}

std::string_view to_string(Level level) noexcept {
  switch (level) {
    case Level::Line: return "line";
    case Level::Record: return "record";
    case Level::Page: return "page";
  }
  return "line";
}

ScopeMode parse_scope_mode(std::string_view text) {
  if (text == "single_word" || text == "single-word") return ScopeMode::SingleWord;
  if (text == "until_next_tag" || text == "until-next-tag") return ScopeMode::UntilNextTag;
  throw Error(ErrorKind::InvalidArgument, "unknown scope mode " + quote_text(text));
}

Level parse_level(std::string_view text) {
  if (text == "line") return Level::Line;
  if (text == "record") return Level::Record;
  if (text == "page") return Level::Page;
  throw Error(ErrorKind::InvalidArgument, "unknown level " + quote_text(text));
}

TagLabel::TagLabel(std::string raw, std::optional<LabelParts> parts)
    : raw_(std::move(raw)), parts_(std::move(parts)) {
  if (raw_.empty()) throw Error(ErrorKind::MalformedTag, "empty label");
  if (raw_.find_first_of("<>") != std::string::npos || contains_space(raw_)) {
    throw Error(ErrorKind::MalformedTag, "invalid label " + quote_text(raw_));
  }
}

// ---------------------------------------------------------------------------
// TagVocabulary

void TagVocabulary::check_label_syntax(std::string_view raw) const {
  if (raw.empty() || contains_space(raw) || raw.find(open_) != std::string_view::npos ||
      raw.find(close_) != std::string_view::npos) {
    throw Error(ErrorKind::InvalidVocabulary, "invalid label " + quote_text(raw));
  }
}

void TagVocabulary::add_label(TagLabel label) {
  check_label_syntax(label.raw());
  if (!index_.emplace(label.raw(), labels_.size()).second) {
    throw Error(ErrorKind::InvalidVocabulary, "duplicate label " + quote_text(label.raw()));
  }
  labels_.push_back(std::move(label));
}

TagVocabulary TagVocabulary::flat(std::vector<std::string> labels, ScopeMode scope) {
  if (labels.empty()) throw Error(ErrorKind::InvalidVocabulary, "no labels");
  TagVocabulary v;
  v.scope_ = scope;
  for (auto& raw : labels) {
    try {
      v.add_label(TagLabel(std::move(raw)));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::MalformedTag) throw Error(ErrorKind::InvalidVocabulary, e.detail());
      throw;
    }
  }
  return v;
}

TagVocabulary TagVocabulary::composite(CompositeScheme scheme, ScopeMode scope,
                                       std::optional<std::vector<std::string>> allowed) {
  if (scheme.categories.empty() || scheme.persons.empty()) {
    throw Error(ErrorKind::InvalidVocabulary, "composite scheme needs categories and persons");
  }
  if (scheme.separator.empty() || contains_space(scheme.separator)) {
    throw Error(ErrorKind::InvalidVocabulary, "invalid separator " + quote_text(scheme.separator));
  }
  for (const auto* list : {&scheme.categories, &scheme.persons}) {
    std::set<std::string> seen;
    for (const auto& part : *list) {
      if (part.empty() || !seen.insert(part).second) {
        throw Error(ErrorKind::InvalidVocabulary, "empty or duplicate component " + quote_text(part));
      }
    }
  }

  TagVocabulary product;
  product.scope_ = scope;
  for (const auto& category : scheme.categories) {
    for (const auto& person : scheme.persons) {
      std::string raw = category + scheme.separator + person;
      try {
        product.add_label(TagLabel(raw, LabelParts{category, person}));
      } catch (const Error& e) {
        throw Error(ErrorKind::InvalidVocabulary, e.detail());
      }
    }
  }
  product.scheme_ = std::move(scheme);
  if (!allowed) return product;

  if (allowed->empty()) throw Error(ErrorKind::InvalidVocabulary, "empty allow-list");
  TagVocabulary restricted;
  restricted.scope_ = scope;
  restricted.scheme_ = product.scheme_;
  for (const auto& raw : *allowed) {
    auto label = product.find(raw);
    if (!label) {
      throw Error(ErrorKind::InvalidVocabulary, "allow-list label " + quote_text(raw) + " is not category x person");
    }
    restricted.add_label(*label);
  }
  return restricted;
}

TagVocabulary TagVocabulary::permissive(ScopeMode scope) {
  TagVocabulary v;
  v.scope_ = scope;
  v.permissive_ = true;
  return v;
}

TagVocabulary TagVocabulary::with_scope(ScopeMode scope) const {
  TagVocabulary v = *this;
  v.scope_ = scope;
  return v;
}

TagVocabulary TagVocabulary::with_delimiters(std::string open, std::string close) const {
  if (open.empty() || close.empty() || contains_space(open) || contains_space(close)) {
    throw Error(ErrorKind::InvalidVocabulary, "invalid tag delimiters");
  }
  TagVocabulary v = *this;
  v.open_ = std::move(open);
  v.close_ = std::move(close);
  for (const auto& label : v.labels_) v.check_label_syntax(label.raw());
  return v;
}

std::optional<TagLabel> TagVocabulary::find(std::string_view raw) const {
  auto it = index_.find(std::string(raw));
  if (it != index_.end()) return labels_[it->second];
  if (!permissive_) return std::nullopt;
  if (raw.empty() || contains_space(raw) || raw.find(open_) != std::string_view::npos ||
      raw.find(close_) != std::string_view::npos || raw.find_first_of("<>") != std::string_view::npos) {
    return std::nullopt;
  }
  return TagLabel(std::string(raw));
}

TagVocabulary vocabulary_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidVocabulary, e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::InvalidVocabulary, "vocabulary must be a JSON object");

  try {
    const ScopeMode scope = parse_scope_mode(j.value("scope_mode", std::string("single_word")));
    std::optional<TagVocabulary> vocab;
    if (j.value("permissive", false)) {
      vocab = TagVocabulary::permissive(scope);
    } else if (j.contains("labels")) {
      vocab = TagVocabulary::flat(j.at("labels").get<std::vector<std::string>>(), scope);
    } else if (j.contains("categories") && j.contains("persons")) {
      CompositeScheme scheme;
      scheme.categories = j.at("categories").get<std::vector<std::string>>();
      scheme.persons = j.at("persons").get<std::vector<std::string>>();
      scheme.separator = j.value("separator", std::string("-"));
      std::optional<std::vector<std::string>> allowed;
      if (j.contains("allow")) allowed = j.at("allow").get<std::vector<std::string>>();
      vocab = TagVocabulary::composite(std::move(scheme), scope, std::move(allowed));
    } else {
      throw Error(ErrorKind::InvalidVocabulary, "expected \"labels\" or \"categories\"+\"persons\"");
    }
    if (j.contains("open_delim") || j.contains("close_delim")) {
      vocab = vocab->with_delimiters(j.value("open_delim", std::string("<")),
                                     j.value("close_delim", std::string(">")));
    }
    return *std::move(vocab);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidVocabulary, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw Error(ErrorKind::InvalidVocabulary, e.detail());
    throw;
  }
}

TagVocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return vocabulary_from_json(buf.str());
}

std::string vocabulary_to_json(const TagVocabulary& vocab) {
  nlohmann::ordered_json j;
  if (vocab.is_permissive()) {
    j["permissive"] = true;
  } else if (vocab.is_composite()) {
    const auto& scheme = *vocab.scheme();
    j["categories"] = scheme.categories;
    j["persons"] = scheme.persons;
    j["separator"] = scheme.separator;
    if (vocab.labels().size() != scheme.categories.size() * scheme.persons.size()) {
      std::vector<std::string> allowed;
      for (const auto& label : vocab.labels()) allowed.push_back(label.raw());
      j["allow"] = allowed;
    }
  } else {
    std::vector<std::string> labels;
    for (const auto& label : vocab.labels()) labels.push_back(label.raw());
    j["labels"] = labels;
  }
  j["scope_mode"] = std::string(to_string(vocab.scope_mode()));
  if (vocab.open_delim() != "<" || vocab.close_delim() != ">") {
    j["open_delim"] = vocab.open_delim();
    j["close_delim"] = vocab.close_delim();
  }
  return j.dump();
}

// ---------------------------------------------------------------------------
// TaggedTranscript

TaggedTranscript::TaggedTranscript(std::vector<Token> tokens, Level level)
    : tokens_(std::move(tokens)), level_(level) {
  bool pending_tag = false;
  for (const auto& token : tokens_) {
    if (const auto* word = std::get_if<Word>(&token)) {
      if (word->text.empty() || contains_space(word->text)) {
        throw Error(ErrorKind::MalformedTag, "invalid word " + quote_text(word->text));
      }
      pending_tag = false;
    } else {
      if (pending_tag) {
        throw Error(ErrorKind::ScopeViolation,
                    "tag " + quote_text(std::get<Tag>(token).label.raw()) + " follows another tag");
      }
      pending_tag = true;
    }
  }
  if (pending_tag) throw Error(ErrorKind::ScopeViolation, "transcript ends with a tag");
}

TaggedTranscript TaggedTranscript::with_level(Level level) const {
  TaggedTranscript t = *this;
  t.level_ = level;
  return t;
}

TaggedTranscript parse_tagged(std::string_view text, const TagVocabulary& vocab, Level level) {
  const std::string normalized = unicode::nfc(text);
  const std::string& open = vocab.open_delim();
  const std::string& close = vocab.close_delim();

  std::vector<Token> tokens;
  bool pending_tag = false;
  for (std::string_view unit : split_units(normalized)) {
    std::string_view rest = unit;
    while (rest.starts_with(open)) {
      const auto close_pos = rest.find(close, open.size());
      if (close_pos == std::string_view::npos) {
        throw Error(ErrorKind::MalformedTag, "unterminated tag in " + quote_text(unit));
      }
      const std::string_view raw = rest.substr(open.size(), close_pos - open.size());
      if (raw.empty() || raw.find(open) != std::string_view::npos) {
        throw Error(ErrorKind::MalformedTag, "bad tag in " + quote_text(unit));
      }
      auto label = vocab.find(raw);
      if (!label) throw Error(ErrorKind::UnknownTag, std::string(raw));
      if (pending_tag) {
        throw Error(ErrorKind::ScopeViolation, "tag " + quote_text(raw) + " follows another tag");
      }
      tokens.emplace_back(Tag{*std::move(label)});
      pending_tag = true;
      rest.remove_prefix(close_pos + close.size());
    }
    if (rest.empty()) continue;
    if (rest.find(open) != std::string_view::npos || rest.find(close) != std::string_view::npos) {
      throw Error(ErrorKind::MalformedTag, "unbalanced delimiter in " + quote_text(unit));
    }
    tokens.emplace_back(Word{std::string(rest)});
    pending_tag = false;
  }
  if (pending_tag) throw Error(ErrorKind::ScopeViolation, "text ends with a tag");
  return TaggedTranscript(std::move(tokens), level);
}

namespace {

std::string serialize_with(const TaggedTranscript& t, std::string_view open, std::string_view close) {
  std::string out;
  bool need_space = false;
  for (const auto& token : t.tokens()) {
    if (need_space) out += ' ';
    if (const auto* word = std::get_if<Word>(&token)) {
      out += word->text;
      need_space = true;
    } else {
      out += open;
      out += std::get<Tag>(token).label.raw();
      out += close;
      need_space = false;
    }
  }
  return out;
}

}  // namespace

std::string serialize(const TaggedTranscript& t, const TagVocabulary& vocab) {
  return serialize_with(t, vocab.open_delim(), vocab.close_delim());
}

std::string serialize(const TaggedTranscript& t) { return serialize_with(t, "<", ">"); }

std::vector<std::string> words_of(const TaggedTranscript& t) {
  std::vector<std::string> words;
  for (const auto& token : t.tokens()) {
    if (const auto* word = std::get_if<Word>(&token)) words.push_back(word->text);
  }
  return words;
}

std::vector<TagLabel> tags_of(const TaggedTranscript& t) {
  std::vector<TagLabel> tags;
  for (const auto& token : t.tokens()) {
    if (const auto* tag = std::get_if<Tag>(&token)) tags.push_back(tag->label);
  }
  return tags;
}

void validate(const TaggedTranscript& t, const TagVocabulary& vocab) {
  for (const auto& token : t.tokens()) {
    if (const auto* tag = std::get_if<Tag>(&token)) {
      if (!vocab.contains(tag->label.raw())) throw Error(ErrorKind::UnknownTag, tag->label.raw());
    } else {
      const auto& text = std::get<Word>(token).text;
      if (text.find(vocab.open_delim()) != std::string::npos ||
          text.find(vocab.close_delim()) != std::string::npos) {
        throw Error(ErrorKind::MalformedTag, "delimiter inside word " + quote_text(text));
      }
    }
  }
}

}  // namespace kvext
