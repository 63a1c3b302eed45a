#include "kvext/corpus.hpp"

#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "kvext/error.hpp"
#include "kvext/unicode.hpp"

namespace kvext {

std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
  }
  return "test";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::Train;
  if (text == "validation" || text == "val" || text == "dev") return Split::Validation;
  if (text == "test") return Split::Test;
  throw Error(ErrorKind::InvalidArgument, "unknown split '" + std::string(text) + "'");
}

namespace {

int level_rank(Level level) {
  switch (level) {
    case Level::Line: return 0;
    case Level::Record: return 1;
    case Level::Page: return 2;
  }
  return 0;
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::string string_field(const nlohmann::json& j, const char* key, std::size_t line_no) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw Error(ErrorKind::Malformed, std::string("field '") + key + "' must be a string", line_no);
  return v.get<std::string>();
}

CorpusRecord parse_record(std::string_view line, const TagVocabulary& vocab, std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Malformed, e.what(), line_no);
  }
  if (!j.is_object()) throw Error(ErrorKind::Malformed, "expected a JSON object", line_no);
  for (const char* key : {"id", "text"}) {
    if (!j.contains(key)) throw Error(ErrorKind::Malformed, std::string("missing field '") + key + "'", line_no);
  }

  CorpusRecord rec;
  rec.id = string_field(j, "id", line_no);
  if (rec.id.empty()) throw Error(ErrorKind::Malformed, "empty id", line_no);
  try {
    if (j.contains("split")) rec.split = parse_split(string_field(j, "split", line_no));
    if (j.contains("level")) rec.level = parse_level(string_field(j, "level", line_no));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw Error(ErrorKind::Malformed, e.detail(), line_no);
    throw;
  }
  if (j.contains("parent_id") && !j.at("parent_id").is_null()) {
    rec.parent_id = string_field(j, "parent_id", line_no);
  }
  const std::string text = string_field(j, "text", line_no);
  try {
    rec.transcript = parse_tagged(text, vocab, rec.level);
  } catch (const Error& e) {
    throw e.at_line(line_no);
  }
  return rec;
}

void check_levels(const Corpus& corpus, const std::unordered_map<std::string, std::size_t>& index) {
  for (const auto& rec : corpus) {
    if (!rec.parent_id) continue;
    auto it = index.find(*rec.parent_id);
    if (it == index.end()) continue;
    if (level_rank(corpus[it->second].level) <= level_rank(rec.level)) {
      throw Error(ErrorKind::Malformed, "record '" + rec.id + "' has parent '" + *rec.parent_id +
                                            "' that is not a coarser level");
    }
  }
}

std::unordered_map<std::string, std::size_t> index_by_id(const Corpus& corpus) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!index.emplace(corpus[i].id, i).second) throw Error(ErrorKind::DuplicateId, corpus[i].id);
  }
  return index;
}

// Children (corpus order) of every record that has at least one.
std::unordered_map<std::size_t, std::vector<std::size_t>> children_of(
    const Corpus& corpus, const std::unordered_map<std::string, std::size_t>& index) {
  std::unordered_map<std::size_t, std::vector<std::size_t>> children;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].parent_id) continue;
    auto it = index.find(*corpus[i].parent_id);
    if (it != index.end()) children[it->second].push_back(i);
  }
  return children;
}

class Assembler {
 public:
  Assembler(const Corpus& corpus, const TagVocabulary& vocab, const ConcatSeparator& separator)
      : corpus_(corpus), vocab_(vocab), separator_(separator), index_(index_by_id(corpus)) {
    check_levels(corpus_, index_);
    children_ = children_of(corpus_, index_);
  }

  bool has_children(std::size_t i) const { return children_.count(i) != 0; }

  TaggedTranscript assembled(std::size_t i) const {
    auto it = children_.find(i);
    if (it == children_.end()) return corpus_[i].transcript;
    std::vector<TaggedTranscript> parts;
    parts.reserve(it->second.size());
    for (std::size_t child : it->second) parts.push_back(assembled(child));
    return concat(parts, separator_, corpus_[i].level, vocab_);
  }

  bool is_root(std::size_t i) const {
    const auto& parent = corpus_[i].parent_id;
    return !parent || index_.count(*parent) == 0;
  }

 private:
  const Corpus& corpus_;
  const TagVocabulary& vocab_;
  ConcatSeparator separator_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> children_;
};

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

// Splits delimited text into rows of cells; quoted cells may contain the
// delimiter, newlines and "" escapes.
std::vector<std::vector<std::string>> split_rows(std::string_view text, char delimiter) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool row_has_content = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"' && trim(cell).empty()) {
      cell.clear();
      quoted = true;
      row_has_content = true;
    } else if (c == delimiter) {
      row.push_back(std::move(cell));
      cell.clear();
      row_has_content = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
      row_has_content = false;
    } else {
      cell += c;
      row_has_content = true;
    }
  }
  if (quoted) throw Error(ErrorKind::Malformed, "unterminated quoted cell", rows.size() + 1);
  if (row_has_content || !cell.empty() || !row.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Corpus read_corpus(std::istream& in, const TagVocabulary& vocab) {
  Corpus corpus;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    CorpusRecord rec = parse_record(line, vocab, line_no);
    if (!ids.insert(rec.id).second) throw Error(ErrorKind::DuplicateId, rec.id, line_no);
    corpus.push_back(std::move(rec));
  }
  if (in.bad()) throw Error(ErrorKind::Io, "read failure");
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, const TagVocabulary& vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_corpus(in, vocab);
}

void write_corpus(std::ostream& out, const Corpus& corpus, const TagVocabulary& vocab) {
  for (const auto& rec : corpus) {
    nlohmann::ordered_json j;
    j["id"] = rec.id;
    j["split"] = std::string(to_string(rec.split));
    j["level"] = std::string(to_string(rec.level));
    j["text"] = serialize(rec.transcript, vocab);
    if (rec.parent_id) j["parent_id"] = *rec.parent_id;
    out << j.dump() << '\n';
  }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus, const TagVocabulary& vocab) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_corpus(out, corpus, vocab);
  if (!out) throw Error(ErrorKind::Io, "write failure on " + path.string());
}

void validate_linkage(const Corpus& corpus, const TagVocabulary& vocab) {
  const Assembler assembler(corpus, vocab, ConcatSeparator::space());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!assembler.has_children(i) || corpus[i].transcript.empty()) continue;
    if (assembler.assembled(i).tokens() != corpus[i].transcript.tokens()) {
      throw Error(ErrorKind::Malformed, "record '" + corpus[i].id + "' does not match its children");
    }
  }
}

Corpus assemble_by_parent(const Corpus& corpus, const TagVocabulary& vocab, const ConcatSeparator& separator) {
  const Assembler assembler(corpus, vocab, separator);
  Corpus out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!assembler.is_root(i)) continue;
    CorpusRecord rec = corpus[i];
    rec.transcript = assembler.assembled(i);
    out.push_back(std::move(rec));
  }
  return out;
}

Corpus read_columnar(std::istream& in, std::span<const std::string> column_labels, const ColumnarOptions& options) {
  // Validates the labels.
  const TagVocabulary vocab = TagVocabulary::flat({column_labels.begin(), column_labels.end()});
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  Corpus corpus;
  const auto rows = split_rows(text, options.delimiter);
  std::size_t data_row = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    const std::size_t row_no = r + 1;
    if (options.header && r == 0) continue;
    if (cells.size() == 1 && trim(cells.front()).empty()) continue;  // blank line
    if (cells.size() != column_labels.size()) {
      throw Error(ErrorKind::ColumnCountMismatch,
                  "row " + std::to_string(row_no) + " has " + std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(column_labels.size()),
                  row_no);
    }
    ++data_row;

    std::vector<Token> tokens;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trim(unicode::nfc(cells[c]));
      if (cell.empty()) continue;
      TaggedTranscript words;
      try {
        words = parse_tagged(cell, vocab);
      } catch (const Error& e) {
        throw Error(ErrorKind::Malformed, "cell " + std::to_string(c + 1) + ": " + e.what(), row_no);
      }
      if (!tags_of(words).empty()) {
        throw Error(ErrorKind::Malformed, "cell " + std::to_string(c + 1) + " contains a tag", row_no);
      }
      if (words.empty()) continue;
      tokens.emplace_back(Tag{*vocab.find(column_labels[c])});
      tokens.insert(tokens.end(), words.tokens().begin(), words.tokens().end());
    }
    CorpusRecord rec;
    rec.id = options.id_prefix + std::to_string(data_row);
    rec.split = options.split;
    rec.level = options.level;
    rec.transcript = TaggedTranscript(std::move(tokens), options.level);
    corpus.push_back(std::move(rec));
  }
  return corpus;
}

Corpus import_columnar(const std::filesystem::path& path, std::span<const std::string> column_labels,
                       const ColumnarOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_columnar(in, column_labels, options);
}

SplitStats stats(const Corpus& corpus) {
  SplitStats s;
  std::unordered_set<std::string> present;
  for (const auto& rec : corpus) present.insert(rec.id);
  std::unordered_set<std::string> has_children;
  for (const auto& rec : corpus) {
    if (rec.parent_id && present.count(*rec.parent_id)) has_children.insert(*rec.parent_id);
  }

  for (const auto& rec : corpus) {
    auto& counts = s[rec.split];
    switch (rec.level) {
      case Level::Page: ++counts.pages; break;
      case Level::Record:
        ++counts.records;
        s.has_records = true;
        break;
      case Level::Line: ++counts.lines; break;
    }
    if (has_children.count(rec.id)) continue;
    for (const auto& token : rec.transcript.tokens()) {
      if (const auto* tag = std::get_if<Tag>(&token)) {
        ++counts.entities;
        ++counts.per_label[tag->label.raw()];
      } else {
        ++counts.words;
      }
    }
  }
  return s;
}

PairedCorpus pair_by_id(const Corpus& refs, const Corpus& hyps) {
  PairedCorpus out;
  std::unordered_map<std::string, const CorpusRecord*> by_id;
  for (const auto& h : hyps) {
    if (!by_id.emplace(h.id, &h).second) throw Error(ErrorKind::DuplicateId, h.id);
  }
  std::unordered_set<std::string> ref_ids;
  for (const auto& r : refs) {
    if (!ref_ids.insert(r.id).second) throw Error(ErrorKind::DuplicateId, r.id);
    EvalPair p;
    p.id = r.id;
    p.ref = r.transcript;
    if (auto it = by_id.find(r.id); it != by_id.end()) {
      p.hyp = it->second->transcript;
    } else {
      out.missing_ids.push_back(r.id);
    }
    out.pairs.push_back(std::move(p));
  }
  for (const auto& h : hyps) {
    if (!ref_ids.count(h.id)) out.unexpected_ids.push_back(h.id);
  }
  return out;
}

}  // namespace kvext
