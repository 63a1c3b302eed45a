#include "kvext/metrics_iehhr.hpp"

#include <algorithm>

#include "kvext/align.hpp"
#include "kvext/error.hpp"
#include "kvext/transforms.hpp"
#include "kvext/unicode.hpp"
#include "parallel.hpp"

namespace kvext {

namespace {

struct EntityWord {
  const TagLabel* label;
  const std::string* text;
};

std::vector<EntityWord> entity_words(const TaggedTranscript& t, ScopeMode scope) {
  std::vector<EntityWord> out;
  const TagLabel* current = nullptr;
  for (const auto& token : t.tokens()) {
    if (const auto* tag = std::get_if<Tag>(&token)) {
      current = &tag->label;
      continue;
    }
    if (current == nullptr) continue;
    out.push_back({current, &std::get<Word>(token).text});
    if (scope == ScopeMode::SingleWord) current = nullptr;
  }
  return out;
}

// Pairs (ref index, hyp index or none), in reference order.
std::vector<std::pair<std::size_t, std::optional<std::size_t>>> pair_words(const std::vector<EntityWord>& ref,
                                                                           const std::vector<EntityWord>& hyp) {
  const std::size_t R = ref.size();
  const std::size_t H = hyp.size();
  // lcs[i * (H + 1) + j] = LCS length of ref[i..] and hyp[j..]
  std::vector<std::size_t> lcs((R + 1) * (H + 1), 0);
  auto at = [H](std::size_t i, std::size_t j) { return i * (H + 1) + j; };
  for (std::size_t i = R; i-- > 0;) {
    for (std::size_t j = H; j-- > 0;) {
      lcs[at(i, j)] = *ref[i].label == *hyp[j].label ? lcs[at(i + 1, j + 1)] + 1
                                                     : std::max(lcs[at(i + 1, j)], lcs[at(i, j + 1)]);
    }
  }

  std::vector<std::pair<std::size_t, std::optional<std::size_t>>> pairs;
  pairs.reserve(R);
  auto fill_gap = [&](std::size_t r_begin, std::size_t r_end, std::size_t h_begin, std::size_t h_end) {
    for (std::size_t r = r_begin, h = h_begin; r < r_end; ++r, ++h) {
      pairs.emplace_back(r, h < h_end ? std::optional<std::size_t>(h) : std::nullopt);
    }
  };

  std::size_t i = 0, j = 0;
  std::size_t gap_r = 0, gap_h = 0;
  while (i < R && j < H) {
    if (*ref[i].label == *hyp[j].label && lcs[at(i, j)] == lcs[at(i + 1, j + 1)] + 1) {
      fill_gap(gap_r, i, gap_h, j);
      pairs.emplace_back(i, j);
      gap_r = ++i;
      gap_h = ++j;
    } else if (lcs[at(i + 1, j)] >= lcs[at(i, j + 1)]) {
      ++i;
    } else {
      ++j;
    }
  }
  fill_gap(gap_r, R, gap_h, H);
  return pairs;
}

std::vector<IehhrWord> score_document(const std::string& id, const TaggedTranscript* hyp, const TaggedTranscript& ref,
                                      const TagVocabulary& vocab) {
  const auto ref_words = entity_words(ref, vocab.scope_mode());
  const auto hyp_words = hyp ? entity_words(*hyp, vocab.scope_mode()) : std::vector<EntityWord>{};

  std::vector<IehhrWord> out;
  out.reserve(ref_words.size());
  for (const auto& [r, h] : pair_words(ref_words, hyp_words)) {
    IehhrWord w;
    w.doc_id = id;
    w.ref_word = *ref_words[r].text;
    w.ref_label = ref_words[r].label->raw();
    if (h) {
      const auto& hw = hyp_words[*h];
      w.hyp_word = *hw.text;
      w.hyp_label = hw.label->raw();
      const auto [ref_category, ref_person] = split_labels(*ref_words[r].label, vocab);
      const auto [hyp_category, hyp_person] = split_labels(*hw.label, vocab);
      w.category_ok = ref_category == hyp_category;
      w.person_ok = ref_person == hyp_person;

      const std::u32string ref_chars = unicode::decode(unicode::nfc(w.ref_word));
      const std::u32string hyp_chars = unicode::decode(unicode::nfc(*w.hyp_word));
      const double cer = 100.0 * static_cast<double>(edit_distance(hyp_chars, ref_chars)) /
                         static_cast<double>(ref_chars.size());
      w.word_cer = std::min(100.0, cer);
      w.basic_score = w.category_ok ? 100.0 - w.word_cer : 0.0;
      w.complete_score = w.category_ok && w.person_ok ? 100.0 - w.word_cer : 0.0;
    }
    out.push_back(std::move(w));
  }
  return out;
}

// Summation in sorted order makes the mean independent of document order.
double mean_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

IehhrReport summarize(std::vector<IehhrWord> words) {
  IehhrReport r;
  std::vector<double> basic, complete;
  basic.reserve(words.size());
  complete.reserve(words.size());
  for (const auto& w : words) {
    basic.push_back(w.basic_score);
    complete.push_back(w.complete_score);
  }
  r.basic = mean_of(std::move(basic));
  r.complete = mean_of(std::move(complete));
  r.words = words.size();
  r.per_word = std::move(words);
  return r;
}

void require_composite(const TagVocabulary& vocab) {
  if (!vocab.is_composite()) {
    throw Error(ErrorKind::NotComposite, "IEHHR scoring needs a category x person vocabulary");
  }
}

}  // namespace

IehhrReport iehhr_score(const TaggedTranscript& hyp, const TaggedTranscript& ref, const TagVocabulary& vocab) {
  require_composite(vocab);
  IehhrReport r = summarize(score_document("", &hyp, ref, vocab));
  r.documents = 1;
  return r;
}

IehhrReport corpus_iehhr(std::span<const EvalPair> pairs, const TagVocabulary& vocab, unsigned jobs) {
  require_composite(vocab);
  auto per_doc = detail::parallel_map<std::vector<IehhrWord>>(pairs.size(), jobs, [&](std::size_t i) {
    const auto& p = pairs[i];
    return score_document(p.id, p.hyp ? &*p.hyp : nullptr, p.ref, vocab);
  });

  std::vector<IehhrWord> pooled;
  for (auto& doc : per_doc) {
    std::move(doc.begin(), doc.end(), std::back_inserter(pooled));
  }
  IehhrReport r = summarize(std::move(pooled));
  r.documents = pairs.size();
  for (const auto& p : pairs) {
    if (!p.hyp) r.missing_ids.push_back(p.id);
  }
  return r;
}

}  // namespace kvext
