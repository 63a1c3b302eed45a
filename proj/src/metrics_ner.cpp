#include "kvext/metrics_ner.hpp"

#include "kvext/error.hpp"
#include "kvext/unicode.hpp"
#include "parallel.hpp"

namespace kvext {

PlainTranscript extract_spans(const TaggedTranscript& t, const TagVocabulary& vocab) {
  PlainTranscript out;
  const bool single_word = vocab.scope_mode() == ScopeMode::SingleWord;

  std::optional<TagLabel> open_label;  // tag waiting for its first word
  bool extending = false;              // last span may still grow (UntilNextTag)
  for (const auto& token : t.tokens()) {
    if (const auto* tag = std::get_if<Tag>(&token)) {
      open_label = tag->label;
      extending = false;
      continue;
    }
    const std::u32string word = unicode::decode(unicode::nfc(std::get<Word>(token).text));
    if (!out.chars.empty()) out.chars.push_back(U' ');
    const std::size_t char_begin = out.chars.size();
    out.chars += word;
    const std::size_t word_index = out.words.size();
    out.words.push_back(unicode::encode(word));

    if (open_label) {
      out.spans.push_back({*std::move(open_label), {word_index, word_index + 1}, {char_begin, out.chars.size()}});
      open_label.reset();
      extending = !single_word;
    } else if (extending) {
      auto& span = out.spans.back();
      span.word_range.end = word_index + 1;
      span.char_range.end = out.chars.size();
    }
  }
  out.text = unicode::encode(out.chars);
  return out;
}

std::vector<EntityMatch> match_entities(const PlainTranscript& hyp, const PlainTranscript& ref, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "threshold must be in (0, 1]");
  }
  std::vector<EntityMatch> matches;
  if (ref.spans.empty() || hyp.spans.empty()) return matches;

  const AlignmentPath path = align_chars(std::u32string_view(hyp.chars), std::u32string_view(ref.chars));
  const SpanProjector projector(path);
  std::vector<bool> used(hyp.spans.size(), false);

  // Hyp spans are sorted and disjoint; start each scan at the first one that
  // could overlap.
  std::size_t scan_from = 0;
  for (std::size_t r = 0; r < ref.spans.size(); ++r) {
    const auto& ref_span = ref.spans[r];
    const CharRange projected = projector.project(ref_span.char_range);
    if (projected.empty()) continue;
    while (scan_from < hyp.spans.size() && hyp.spans[scan_from].char_range.end <= projected.begin) ++scan_from;

    const std::u32string_view ref_text =
        std::u32string_view(ref.chars).substr(ref_span.char_range.begin, ref_span.char_range.size());
    for (std::size_t h = scan_from; h < hyp.spans.size(); ++h) {
      const auto& hyp_span = hyp.spans[h];
      if (hyp_span.char_range.begin >= projected.end) break;
      if (used[h] || hyp_span.label != ref_span.label || !hyp_span.char_range.overlaps(projected)) continue;
      const std::u32string_view hyp_text =
          std::u32string_view(hyp.chars).substr(hyp_span.char_range.begin, hyp_span.char_range.size());
      const std::size_t distance = edit_distance(hyp_text, ref_text);
      const double ratio = static_cast<double>(distance) / static_cast<double>(ref_text.size());
      if (ratio < threshold) {
        used[h] = true;
        matches.push_back({r, h, distance});
        break;
      }
    }
  }
  return matches;
}

LabelScore make_label_score(std::size_t matched, std::size_t predicted, std::size_t expected) {
  LabelScore s;
  s.matched = matched;
  s.predicted = predicted;
  s.expected = expected;
  s.precision_defined = predicted > 0;
  s.recall_defined = expected > 0;
  s.precision = predicted > 0 ? 100.0 * static_cast<double>(matched) / static_cast<double>(predicted) : 0.0;
  s.recall = expected > 0 ? 100.0 * static_cast<double>(matched) / static_cast<double>(expected) : 0.0;
  const double sum = s.precision + s.recall;
  s.f1 = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
  return s;
}

namespace {

struct Tally {
  std::size_t matched = 0;
  std::size_t predicted = 0;
  std::size_t expected = 0;
};

using TallyMap = std::map<std::string, Tally>;

}  // namespace

NerReport ner_evaluate(std::span<const EvalPair> pairs, const TagVocabulary& vocab, const NerOptions& options) {
  if (!(options.threshold > 0.0 && options.threshold <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "threshold must be in (0, 1]");
  }
  if (options.axis != LabelAxis::Full && !vocab.is_composite()) {
    throw Error(ErrorKind::NotComposite, "axis '" + std::string(to_string(options.axis)) + "' needs a composite vocabulary");
  }

  auto per_doc = detail::parallel_map<TallyMap>(pairs.size(), options.jobs, [&](std::size_t i) {
    const auto& p = pairs[i];
    TallyMap tally;
    const PlainTranscript ref = extract_spans(relabel(p.ref, options.axis, vocab), vocab);
    for (const auto& span : ref.spans) ++tally[span.label.raw()].expected;
    if (!p.hyp) return tally;

    const PlainTranscript hyp = extract_spans(relabel(*p.hyp, options.axis, vocab), vocab);
    for (const auto& span : hyp.spans) ++tally[span.label.raw()].predicted;
    for (const auto& m : match_entities(hyp, ref, options.threshold)) {
      ++tally[ref.spans[m.ref_span].label.raw()].matched;
    }
    return tally;
  });

  TallyMap pooled;
  for (const auto& doc : per_doc) {
    for (const auto& [label, t] : doc) {
      auto& dst = pooled[label];
      dst.matched += t.matched;
      dst.predicted += t.predicted;
      dst.expected += t.expected;
    }
  }

  NerReport report;
  report.documents = pairs.size();
  Tally all;
  for (const auto& [label, t] : pooled) {
    report.per_label.emplace(label, make_label_score(t.matched, t.predicted, t.expected));
    all.matched += t.matched;
    all.predicted += t.predicted;
    all.expected += t.expected;
  }
  report.overall = make_label_score(all.matched, all.predicted, all.expected);
  for (const auto& p : pairs) {
    if (!p.hyp) report.missing_ids.push_back(p.id);
  }
  return report;
}

}  // namespace kvext
