#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kvext/align.hpp"
#include "kvext/corpus.hpp"
#include "kvext/error.hpp"
#include "kvext/metrics_htr.hpp"
#include "kvext/metrics_iehhr.hpp"
#include "kvext/metrics_ner.hpp"
#include "kvext/transcript.hpp"
#include "kvext/transforms.hpp"
#include "kvext/unicode.hpp"

namespace py = pybind11;
using namespace kvext;

namespace {

using PyPair = std::tuple<std::string, std::optional<TaggedTranscript>, TaggedTranscript>;

std::vector<EvalPair> to_pairs(const std::vector<PyPair>& pairs) {
  std::vector<EvalPair> out;
  out.reserve(pairs.size());
  for (const auto& [id, hyp, ref] : pairs) out.push_back({id, hyp, ref});
  return out;
}

py::dict score_dict(const LabelScore& s) {
  py::dict d;
  d["precision"] = s.precision;
  d["recall"] = s.recall;
  d["f1"] = s.f1;
  d["matched"] = s.matched;
  d["predicted"] = s.predicted;
  d["expected"] = s.expected;
  d["precision_defined"] = s.precision_defined;
  d["recall_defined"] = s.recall_defined;
  return d;
}

py::dict counts_dict(const SplitCounts& c) {
  py::dict d;
  d["pages"] = c.pages;
  d["records"] = c.records;
  d["lines"] = c.lines;
  d["words"] = c.words;
  d["entities"] = c.entities;
  d["per_label"] = c.per_label;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tagged transcriptions, annotation transforms and HTR/NER/IEHHR metrics";

  // Module-lifetime reference, never released.
  static PyObject* error_type = py::exception<Error>(m, "Error", PyExc_ValueError).inc_ref().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type)(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      exc.attr("detail") = e.detail();
      exc.attr("line") = e.line() ? py::cast(*e.line()) : py::none();
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  py::class_<TagVocabulary>(m, "Vocabulary")
      .def_static(
          "flat",
          [](std::vector<std::string> labels, const std::string& scope) {
            return TagVocabulary::flat(std::move(labels), parse_scope_mode(scope));
          },
          py::arg("labels"), py::arg("scope") = "single_word")
      .def_static(
          "composite",
          [](std::vector<std::string> categories, std::vector<std::string> persons, std::string separator,
             const std::string& scope, std::optional<std::vector<std::string>> allow) {
            return TagVocabulary::composite({std::move(categories), std::move(persons), std::move(separator)},
                                            parse_scope_mode(scope), std::move(allow));
          },
          py::arg("categories"), py::arg("persons"), py::arg("separator") = "-", py::arg("scope") = "single_word",
          py::arg("allow") = py::none())
      .def_static(
          "permissive", [](const std::string& scope) { return TagVocabulary::permissive(parse_scope_mode(scope)); },
          py::arg("scope") = "single_word")
      .def_static("from_json", [](const std::string& text) { return vocabulary_from_json(text); })
      .def_static("load", [](const std::string& path) { return load_vocabulary(path); })
      .def("to_json", [](const TagVocabulary& v) { return vocabulary_to_json(v); })
      .def("__contains__", [](const TagVocabulary& v, const std::string& label) { return v.contains(label); })
      .def_property_readonly("labels",
                             [](const TagVocabulary& v) {
                               std::vector<std::string> out;
                               for (const auto& l : v.labels()) out.push_back(l.raw());
                               return out;
                             })
      .def_property_readonly("scope", [](const TagVocabulary& v) { return std::string(to_string(v.scope_mode())); })
      .def_property_readonly("is_composite", &TagVocabulary::is_composite);

  py::class_<TaggedTranscript>(m, "Transcript")
      .def_static(
          "parse",
          [](const std::string& text, const TagVocabulary& vocab, const std::string& level) {
            return parse_tagged(text, vocab, parse_level(level));
          },
          py::arg("text"), py::arg("vocab"), py::arg("level") = "line")
      .def("serialize", [](const TaggedTranscript& t, const TagVocabulary& v) { return serialize(t, v); })
      .def("__str__", [](const TaggedTranscript& t) { return serialize(t); })
      .def("__repr__", [](const TaggedTranscript& t) { return "Transcript('" + serialize(t) + "')"; })
      .def("__eq__", [](const TaggedTranscript& a, const TaggedTranscript& b) { return a == b; })
      .def("__len__", &TaggedTranscript::size)
      .def_property_readonly("words", [](const TaggedTranscript& t) { return words_of(t); })
      .def_property_readonly("tags",
                             [](const TaggedTranscript& t) {
                               std::vector<std::string> out;
                               for (const auto& l : tags_of(t)) out.push_back(l.raw());
                               return out;
                             })
      .def_property_readonly("level", [](const TaggedTranscript& t) { return std::string(to_string(t.level())); });

  m.def("strip_tags", &strip_tags, py::arg("transcript"));
  m.def(
      "to_key_value",
      [](const TaggedTranscript& t, const TagVocabulary& vocab, std::optional<std::uint64_t> seed) {
        return to_key_value(t, vocab, {seed});
      },
      py::arg("transcript"), py::arg("vocab"), py::arg("shuffle_seed") = py::none());
  m.def(
      "combine_labels",
      [](const std::string& c, const std::string& p, const TagVocabulary& v) { return combine_labels(c, p, v).raw(); },
      py::arg("category"), py::arg("person"), py::arg("vocab"));
  m.def(
      "split_labels", [](const std::string& label, const TagVocabulary& v) { return split_labels(TagLabel(label), v); },
      py::arg("label"), py::arg("vocab"));

  m.def(
      "edit_distance",
      [](const std::string& a, const std::string& b) {
        py::gil_scoped_release release;
        return edit_distance(std::string_view(a), std::string_view(b));
      },
      py::arg("a"), py::arg("b"), "Levenshtein distance over NFC-normalized code points.");
  m.def(
      "align",
      [](const std::string& hyp, const std::string& ref) {
        const auto path = align_chars(std::string_view(hyp), std::string_view(ref));
        std::vector<std::tuple<std::string, std::optional<std::size_t>, std::optional<std::size_t>>> ops;
        ops.reserve(path.ops.size());
        for (const auto& op : path.ops) ops.emplace_back(std::string(to_string(op.kind)), op.hyp_index, op.ref_index);
        return py::make_tuple(path.cost, ops);
      },
      py::arg("hyp"), py::arg("ref"), "Returns (cost, [(kind, hyp_index, ref_index), ...]).");

  m.def("cer", &cer, py::arg("hyp"), py::arg("ref"));
  m.def("wer", &wer, py::arg("hyp"), py::arg("ref"));

  m.def(
      "evaluate_htr",
      [](const std::vector<PyPair>& pairs, unsigned jobs) {
        const auto all = to_pairs(pairs);
        HtrReport r;
        {
          py::gil_scoped_release release;
          r = corpus_htr(all, jobs);
        }
        py::dict d;
        d["cer"] = r.cer;
        d["wer"] = r.wer;
        d["char_errors"] = r.char_errors;
        d["char_total"] = r.char_total;
        d["word_errors"] = r.word_errors;
        d["word_total"] = r.word_total;
        d["documents"] = r.documents;
        d["missing_ids"] = r.missing_ids;
        return d;
      },
      py::arg("pairs"), py::arg("jobs") = 1, "pairs: [(id, hyp or None, ref), ...]");
  m.def(
      "evaluate_ner",
      [](const std::vector<PyPair>& pairs, const TagVocabulary& vocab, double threshold, const std::string& axis,
         unsigned jobs) {
        const auto all = to_pairs(pairs);
        NerReport r;
        {
          py::gil_scoped_release release;
          r = ner_evaluate(all, vocab, {threshold, parse_label_axis(axis), jobs});
        }
        py::dict per_label;
        for (const auto& [label, s] : r.per_label) per_label[py::str(label)] = score_dict(s);
        py::dict d;
        d["overall"] = score_dict(r.overall);
        d["per_label"] = per_label;
        d["documents"] = r.documents;
        d["missing_ids"] = r.missing_ids;
        return d;
      },
      py::arg("pairs"), py::arg("vocab"), py::arg("threshold") = kDefaultMatchThreshold, py::arg("axis") = "full",
      py::arg("jobs") = 1);
  m.def(
      "evaluate_iehhr",
      [](const std::vector<PyPair>& pairs, const TagVocabulary& vocab, unsigned jobs) {
        const auto all = to_pairs(pairs);
        IehhrReport r;
        {
          py::gil_scoped_release release;
          r = corpus_iehhr(all, vocab, jobs);
        }
        py::list words;
        for (const auto& w : r.per_word) {
          py::dict x;
          x["doc_id"] = w.doc_id;
          x["ref_word"] = w.ref_word;
          x["ref_label"] = w.ref_label;
          x["hyp_word"] = w.hyp_word;
          x["hyp_label"] = w.hyp_label;
          x["word_cer"] = w.word_cer;
          x["basic"] = w.basic_score;
          x["complete"] = w.complete_score;
          words.append(x);
        }
        py::dict d;
        d["basic"] = r.basic;
        d["complete"] = r.complete;
        d["words"] = r.words;
        d["documents"] = r.documents;
        d["missing_ids"] = r.missing_ids;
        d["per_word"] = words;
        return d;
      },
      py::arg("pairs"), py::arg("vocab"), py::arg("jobs") = 1);

  m.def(
      "load_corpus",
      [](const std::string& path, const TagVocabulary& vocab) {
        py::list out;
        for (const auto& rec : load_corpus(path, vocab)) {
          py::dict d;
          d["id"] = rec.id;
          d["split"] = std::string(to_string(rec.split));
          d["level"] = std::string(to_string(rec.level));
          d["transcript"] = rec.transcript;
          d["parent_id"] = rec.parent_id;
          out.append(d);
        }
        return out;
      },
      py::arg("path"), py::arg("vocab"));
  m.def(
      "stats",
      [](const std::string& path, const TagVocabulary& vocab) {
        const auto s = stats(load_corpus(path, vocab));
        py::dict d;
        for (auto split : kAllSplits) d[py::str(std::string(to_string(split)))] = counts_dict(s[split]);
        d["has_records"] = s.has_records;
        return d;
      },
      py::arg("path"), py::arg("vocab"), "Split statistics of a JSON Lines corpus.");
}
