#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kvext/corpus.hpp"
#include "kvext/error.hpp"
#include "kvext/metrics_htr.hpp"
#include "kvext/metrics_iehhr.hpp"
#include "kvext/metrics_ner.hpp"

namespace kvext::cli {

namespace {

using nlohmann::json;

constexpr int code(ExitCode c) { return static_cast<int>(c); }

std::string fixed(double v, int digits = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// 29581 -> "29,581"
std::string grouped(std::size_t n) {
  std::string digits = std::to_string(n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t stable_hash(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

TagVocabulary resolve_vocab(const RunConfig& cfg) {
  TagVocabulary vocab = cfg.vocab.empty() ? TagVocabulary::permissive() : load_vocabulary(cfg.vocab);
  if (cfg.scope) vocab = vocab.with_scope(*cfg.scope);
  return vocab;
}

json label_score_json(const LabelScore& s) {
  return json{{"precision", s.precision}, {"recall", s.recall},     {"f1", s.f1},
              {"matched", s.matched},     {"predicted", s.predicted}, {"expected", s.expected},
              {"precision_defined", s.precision_defined}, {"recall_defined", s.recall_defined}};
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw Error(ErrorKind::Io, "cannot write " + path);
    stream_ = &file_;
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

// Reports ids that made the evaluation partial; returns the exit code.
int report_diagnostics(const PairedCorpus& paired, std::ostream& err) {
  for (const auto& id : paired.missing_ids) err << "warning: no prediction for '" << id << "'\n";
  for (const auto& id : paired.unexpected_ids) err << "warning: prediction '" << id << "' has no reference\n";
  return paired.missing_ids.empty() && paired.unexpected_ids.empty() ? code(ExitCode::Ok)
                                                                      : code(ExitCode::Diagnostics);
}

int do_transform(const RunConfig& cfg, std::ostream& out) {
  const TagVocabulary vocab = resolve_vocab(cfg);
  Corpus corpus = load_corpus(cfg.input, vocab);
  const KeyValueOptions options{cfg.shuffle_seed};
  for (auto& rec : corpus) {
    KeyValueOptions per_record = options;
    // Per-record seeds keep records independent of corpus order.
    if (per_record.shuffle_seed) per_record.shuffle_seed = *per_record.shuffle_seed ^ stable_hash(rec.id);
    rec.transcript = to_regime(rec.transcript, cfg.regime, vocab, per_record);
  }
  Output dst(cfg.output, out);
  write_corpus(dst.stream(), corpus, vocab);
  return code(ExitCode::Ok);
}

void print_htr_table(const HtrReport& r, std::ostream& out) {
  out << std::left << std::setw(12) << "Documents" << std::right << std::setw(10) << "CER (%)" << std::setw(10)
      << "WER (%)" << std::setw(16) << "Char err/total" << std::setw(16) << "Word err/total" << '\n';
  out << std::left << std::setw(12) << r.documents << std::right << std::setw(10) << fixed(r.cer) << std::setw(10)
      << fixed(r.wer) << std::setw(16) << (std::to_string(r.char_errors) + "/" + std::to_string(r.char_total))
      << std::setw(16) << (std::to_string(r.word_errors) + "/" + std::to_string(r.word_total)) << '\n';
}

void print_ner_table(const NerReport& r, std::ostream& out) {
  std::size_t width = 8;
  for (const auto& [label, _] : r.per_label) width = std::max(width, label.size() + 2);
  auto row = [&](const std::string& label, const LabelScore& s) {
    out << std::left << std::setw(static_cast<int>(width)) << label << std::right << std::setw(10) << s.predicted
        << std::setw(10) << s.expected << std::setw(10) << s.matched << std::setw(9)
        << (s.precision_defined ? fixed(s.precision) : std::string("n/a")) << std::setw(9)
        << (s.recall_defined ? fixed(s.recall) : std::string("n/a")) << std::setw(9) << fixed(s.f1) << '\n';
  };
  out << std::left << std::setw(static_cast<int>(width)) << "Label" << std::right << std::setw(10) << "Predicted"
      << std::setw(10) << "Expected" << std::setw(10) << "Matched" << std::setw(9) << "P (%)" << std::setw(9)
      << "R (%)" << std::setw(9) << "F1 (%)" << '\n';
  for (const auto& [label, s] : r.per_label) row(label, s);
  row("ALL", r.overall);
}

void print_iehhr_table(const IehhrReport& r, bool details, std::ostream& out) {
  if (details) {
    out << std::left << std::setw(16) << "Document" << std::setw(20) << "Reference" << std::setw(20) << "Hypothesis"
        << std::right << std::setw(10) << "CER (%)" << std::setw(10) << "Basic" << std::setw(10) << "Complete"
        << '\n';
    for (const auto& w : r.per_word) {
      const std::string hyp = w.hyp_word ? "<" + *w.hyp_label + ">" + *w.hyp_word : "-";
      out << std::left << std::setw(16) << w.doc_id << std::setw(20) << ("<" + w.ref_label + ">" + w.ref_word)
          << std::setw(20) << hyp << std::right << std::setw(10) << fixed(w.word_cer) << std::setw(10)
          << fixed(w.basic_score) << std::setw(10) << fixed(w.complete_score) << '\n';
    }
    out << '\n';
  }
  out << std::left << std::setw(10) << "Words" << std::right << std::setw(10) << "Basic" << std::setw(10)
      << "Complete" << '\n';
  out << std::left << std::setw(10) << r.words << std::right << std::setw(10) << fixed(r.basic) << std::setw(10)
      << fixed(r.complete) << '\n';
}

int do_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const TagVocabulary vocab = resolve_vocab(cfg);
  if (cfg.metric == "iehhr" && !vocab.is_composite()) {
    throw Error(ErrorKind::NotComposite, "evaluate iehhr needs a category x person vocabulary (--vocab)");
  }
  const Corpus refs = load_corpus(cfg.refs, vocab);
  const Corpus hyps = load_corpus(cfg.hyps, vocab);
  const PairedCorpus paired = pair_by_id(refs, hyps);

  json j;
  j["metric"] = cfg.metric;
  j["missing_ids"] = paired.missing_ids;
  j["unexpected_ids"] = paired.unexpected_ids;
  std::ostringstream table;

  if (cfg.metric == "htr") {
    const HtrReport r = corpus_htr(paired.pairs, cfg.jobs);
    j["cer"] = r.cer;
    j["wer"] = r.wer;
    j["char_errors"] = r.char_errors;
    j["char_total"] = r.char_total;
    j["word_errors"] = r.word_errors;
    j["word_total"] = r.word_total;
    j["documents"] = r.documents;
    print_htr_table(r, table);
  } else if (cfg.metric == "ner") {
    const NerReport r = ner_evaluate(paired.pairs, vocab, NerOptions{cfg.threshold, cfg.axis, cfg.jobs});
    j["threshold"] = cfg.threshold;
    j["axis"] = std::string(to_string(cfg.axis));
    j["documents"] = r.documents;
    j["overall"] = label_score_json(r.overall);
    json per_label = json::object();
    for (const auto& [label, s] : r.per_label) per_label[label] = label_score_json(s);
    j["per_label"] = per_label;
    print_ner_table(r, table);
  } else {
    const IehhrReport r = corpus_iehhr(paired.pairs, vocab, cfg.jobs);
    j["basic"] = r.basic;
    j["complete"] = r.complete;
    j["words"] = r.words;
    j["documents"] = r.documents;
    if (cfg.details) {
      json words = json::array();
      for (const auto& w : r.per_word) {
        words.push_back({{"doc_id", w.doc_id},
                         {"ref_word", w.ref_word},
                         {"ref_label", w.ref_label},
                         {"hyp_word", w.hyp_word ? json(*w.hyp_word) : json(nullptr)},
                         {"hyp_label", w.hyp_label ? json(*w.hyp_label) : json(nullptr)},
                         {"category_ok", w.category_ok},
                         {"person_ok", w.person_ok},
                         {"word_cer", w.word_cer},
                         {"basic_score", w.basic_score},
                         {"complete_score", w.complete_score}});
      }
      j["per_word"] = words;
    }
    print_iehhr_table(r, cfg.details, table);
  }

  Output dst(cfg.output, out);
  if (cfg.format == OutputFormat::Json) {
    dst.stream() << j.dump(2) << '\n';
  } else {
    dst.stream() << table.str();
  }
  return report_diagnostics(paired, err);
}

void print_stats_table(const SplitStats& s, std::ostream& out) {
  auto row = [&](const std::string& name, auto field) {
    out << std::left << std::setw(18) << name << std::right;
    for (Split split : kAllSplits) out << std::setw(12) << grouped(field(s[split]));
    out << '\n';
  };
  out << std::left << std::setw(18) << "" << std::right << std::setw(12) << "Train" << std::setw(12) << "Validation"
      << std::setw(12) << "Test" << '\n';
  row("Pages", [](const SplitCounts& c) { return c.pages; });
  if (s.has_records) row("Records", [](const SplitCounts& c) { return c.records; });
  row("Lines", [](const SplitCounts& c) { return c.lines; });
  row("Words", [](const SplitCounts& c) { return c.words; });
  row("Entities", [](const SplitCounts& c) { return c.entities; });

  std::set<std::string> labels;
  for (Split split : kAllSplits) {
    for (const auto& [label, _] : s[split].per_label) labels.insert(label);
  }
  if (labels.empty()) return;
  out << '\n';
  for (const auto& label : labels) {
    row(label, [&label](const SplitCounts& c) {
      auto it = c.per_label.find(label);
      return it == c.per_label.end() ? std::size_t{0} : it->second;
    });
  }
}

int do_stats(const RunConfig& cfg, std::ostream& out) {
  const TagVocabulary vocab = resolve_vocab(cfg);
  const Corpus corpus = load_corpus(cfg.input, vocab);
  const SplitStats s = stats(corpus);
  Output dst(cfg.output, out);
  if (cfg.format == OutputFormat::Table) {
    print_stats_table(s, dst.stream());
    return code(ExitCode::Ok);
  }
  json j;
  j["has_records"] = s.has_records;
  for (Split split : kAllSplits) {
    const auto& c = s[split];
    json entry{{"pages", c.pages}, {"lines", c.lines}, {"words", c.words}, {"entities", c.entities},
               {"per_label", c.per_label}};
    if (s.has_records) entry["records"] = c.records;
    j[std::string(to_string(split))] = entry;
  }
  dst.stream() << j.dump(2) << '\n';
  return code(ExitCode::Ok);
}

int do_import(const RunConfig& cfg, std::ostream& out) {
  ColumnarOptions options;
  options.delimiter = cfg.delimiter;
  options.header = cfg.header;
  options.id_prefix = cfg.id_prefix;
  options.split = parse_split(cfg.split);
  options.level = parse_level(cfg.level);
  const Corpus corpus = import_columnar(cfg.input, cfg.columns, options);
  Output dst(cfg.output, out);
  write_corpus(dst.stream(), corpus, TagVocabulary::flat(cfg.columns));
  return code(ExitCode::Ok);
}

char parse_delimiter(const std::string& text) {
  if (text == "tab" || text == "\\t") return '\t';
  if (text == "comma") return ',';
  if (text == "semicolon") return ';';
  if (text.size() == 1) return text[0];
  throw Error(ErrorKind::InvalidArgument, "delimiter must be tab, comma, semicolon or a single character");
}

void add_format_options(CLI::App* app, RunConfig& cfg, std::string& format) {
  app->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "table"}));
  app->add_option("--output,-o", cfg.output, "Write the report to this file instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string format = "json";
  std::string regime = "htr-ner";
  std::string scope;
  std::string axis = "full";
  std::string delimiter = "tab";
  std::optional<std::uint64_t> seed;

  CLI::App app{"Tagged transcription toolkit: format transforms, HTR/NER/IEHHR evaluation, corpus statistics"};
  app.name(args.empty() ? "kvext" : args.front());
  app.require_subcommand(1);

  auto add_vocab = [&cfg](CLI::App* sub) {
    sub->add_option("--vocab", cfg.vocab, "Tag vocabulary JSON")->envname("KVEXT_VOCAB")->check(CLI::ExistingFile);
  };

  auto* transform = app.add_subcommand("transform", "Derive htr / htr-ner / key-value transcripts from a corpus");
  transform->add_option("--input,-i", cfg.input, "Input corpus (JSON Lines)")->required()->check(CLI::ExistingFile);
  transform->add_option("--output,-o", cfg.output, "Output corpus (default stdout)");
  transform->add_option("--regime", regime, "Target regime")
      ->check(CLI::IsMember({"htr", "htr-ner", "key-value"}));
  transform->add_option("--scope", scope, "Tag scope")->check(CLI::IsMember({"single-word", "until-next-tag"}));
  transform->add_option("--shuffle-seed", seed, "Emit key-value units in a seeded random order");
  add_vocab(transform);

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against references");
  evaluate->require_subcommand(1);
  for (const char* metric : {"htr", "ner", "iehhr"}) {
    auto* sub = evaluate->add_subcommand(metric, std::string(metric) + " metrics");
    sub->add_option("--refs", cfg.refs, "Reference corpus (JSON Lines)")->required()->check(CLI::ExistingFile);
    sub->add_option("--hyps", cfg.hyps, "Prediction corpus (JSON Lines)")->required()->check(CLI::ExistingFile);
    sub->add_option("--jobs,-j", cfg.jobs, "Worker threads (default: all processors)");
    sub->add_option("--scope", scope, "Tag scope")->check(CLI::IsMember({"single-word", "until-next-tag"}));
    add_vocab(sub);
    add_format_options(sub, cfg, format);
    if (std::string(metric) == "ner") {
      sub->add_option("--threshold", cfg.threshold, "Maximum edit-distance ratio (exclusive) for a match");
      sub->add_option("--axis", axis, "Label axis for composite vocabularies")
          ->check(CLI::IsMember({"full", "category", "person"}));
    }
    if (std::string(metric) == "iehhr") {
      sub->add_flag("--details", cfg.details, "Include per-word scores");
    }
    sub->callback([&cfg, metric] { cfg.metric = metric; });
  }

  auto* stats_cmd = app.add_subcommand("stats", "Pages, records, lines, words and entities per split");
  stats_cmd->add_option("--input,-i", cfg.input, "Corpus (JSON Lines)")->required()->check(CLI::ExistingFile);
  add_vocab(stats_cmd);
  add_format_options(stats_cmd, cfg, format);

  auto* import = app.add_subcommand("import", "Convert external ground truth to JSON Lines");
  import->require_subcommand(1);
  auto* columnar = import->add_subcommand("columnar", "One row per record, one column per entity label");
  columnar->add_option("--input,-i", cfg.input, "Delimited file")->required()->check(CLI::ExistingFile);
  columnar->add_option("--columns", cfg.columns, "Column labels in order")->required()->delimiter(',');
  columnar->add_option("--delimiter", delimiter, "tab, comma, semicolon or a single character");
  columnar->add_flag("--header", cfg.header, "Skip the first row");
  columnar->add_option("--split", cfg.split, "Split of the imported records")
      ->check(CLI::IsMember({"train", "validation", "test"}));
  columnar->add_option("--level", cfg.level, "Level of the imported records")
      ->check(CLI::IsMember({"line", "record", "page"}));
  columnar->add_option("--id-prefix", cfg.id_prefix, "Record ids are prefix + row number");
  columnar->add_option("--output,-o", cfg.output, "Output corpus (default stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("kvext");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return code(ExitCode::Ok);
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return code(ExitCode::Ok);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << "run with --help for usage\n";
    return code(ExitCode::Usage);
  }

  try {
    cfg.format = format == "table" ? OutputFormat::Table : OutputFormat::Json;
    cfg.regime = parse_regime(regime);
    cfg.axis = parse_label_axis(axis);
    if (!scope.empty()) cfg.scope = parse_scope_mode(scope);
    cfg.delimiter = parse_delimiter(delimiter);
    cfg.shuffle_seed = seed;
    if (!(cfg.threshold > 0.0 && cfg.threshold <= 1.0)) {
      err << "error: --threshold must be in (0, 1], got " << cfg.threshold << '\n';
      return code(ExitCode::Usage);
    }

    if (transform->parsed()) return do_transform(cfg, out);
    if (evaluate->parsed()) return do_evaluate(cfg, out, err);
    if (stats_cmd->parsed()) return do_stats(cfg, out);
    if (import->parsed()) return do_import(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return code(ExitCode::Usage);
  }
  return code(ExitCode::Usage);
}

}  // namespace kvext::cli
