#include "kvext/metrics_htr.hpp"

#include "kvext/align.hpp"
#include "kvext/error.hpp"
#include "kvext/transforms.hpp"
#include "kvext/unicode.hpp"
#include "parallel.hpp"

namespace kvext {

namespace {

struct Counts {
  std::size_t char_errors = 0;
  std::size_t char_total = 0;
  std::size_t word_errors = 0;
  std::size_t word_total = 0;
};

double percent(std::size_t errors, std::size_t total) {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(errors) / static_cast<double>(total);
}

Counts count(const TaggedTranscript& hyp, const TaggedTranscript& ref) {
  const TaggedTranscript hyp_text = strip_tags(hyp);
  const TaggedTranscript ref_text = strip_tags(ref);
  const std::u32string ref_chars = unicode::decode(unicode::nfc(serialize(ref_text)));
  if (ref_chars.empty()) throw Error(ErrorKind::EmptyReference, "");
  const std::u32string hyp_chars = unicode::decode(unicode::nfc(serialize(hyp_text)));
  const auto ref_words = words_of(ref_text);
  const auto hyp_words = words_of(hyp_text);

  Counts c;
  c.char_errors = edit_distance(hyp_chars, ref_chars);
  c.char_total = ref_chars.size();
  c.word_errors = edit_distance(std::span<const std::string>(hyp_words), std::span<const std::string>(ref_words));
  c.word_total = ref_words.size();
  return c;
}

HtrReport finish(const Counts& c) {
  HtrReport r;
  r.char_errors = c.char_errors;
  r.char_total = c.char_total;
  r.word_errors = c.word_errors;
  r.word_total = c.word_total;
  r.cer = percent(c.char_errors, c.char_total);
  r.wer = percent(c.word_errors, c.word_total);
  return r;
}

}  // namespace

HtrReport htr_score(const TaggedTranscript& hyp, const TaggedTranscript& ref) {
  HtrReport r = finish(count(hyp, ref));
  r.documents = 1;
  return r;
}

double cer(const TaggedTranscript& hyp, const TaggedTranscript& ref) { return htr_score(hyp, ref).cer; }

double wer(const TaggedTranscript& hyp, const TaggedTranscript& ref) { return htr_score(hyp, ref).wer; }

HtrReport corpus_htr(std::span<const EvalPair> pairs, unsigned jobs) {
  const TaggedTranscript empty;
  auto per_doc = detail::parallel_map<Counts>(pairs.size(), jobs, [&](std::size_t i) {
    const auto& p = pairs[i];
    try {
      return count(p.hyp ? *p.hyp : empty, p.ref);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::EmptyReference) throw Error(ErrorKind::EmptyReference, p.id);
      throw;
    }
  });

  Counts total;
  for (const auto& c : per_doc) {
    total.char_errors += c.char_errors;
    total.char_total += c.char_total;
    total.word_errors += c.word_errors;
    total.word_total += c.word_total;
  }
  HtrReport r = finish(total);
  r.documents = pairs.size();
  for (const auto& p : pairs) {
    if (!p.hyp) r.missing_ids.push_back(p.id);
  }
  return r;
}

}  // namespace kvext
