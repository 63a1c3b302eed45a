#include "kvext/align.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <unordered_map>
#include <utility>

#include "kvext/error.hpp"
#include "kvext/unicode.hpp"

namespace kvext {

std::string_view to_string(EditKind kind) noexcept {
  switch (kind) {
    case EditKind::Match: return "match";
    case EditKind::Substitute: return "substitute";
    case EditKind::Insert: return "insert";
    case EditKind::Delete: return "delete";
  }
  return "match";
}

namespace {

constexpr std::size_t kWord = 64;

// Per-symbol match masks for a pattern of at most 64 symbols.
class WordMasks {
 public:
  explicit WordMasks(std::u32string_view pattern) {
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      const uint64_t bit = uint64_t{1} << i;
      const char32_t c = pattern[i];
      if (c < ascii_.size()) {
        ascii_[c] |= bit;
        continue;
      }
      std::size_t k = 0;
      while (k < extended_count_ && extended_symbol_[k] != c) ++k;
      if (k == extended_count_) {
        extended_symbol_[k] = c;
        extended_mask_[k] = 0;
        ++extended_count_;
      }
      extended_mask_[k] |= bit;
    }
  }

  uint64_t get(char32_t c) const noexcept {
    if (c < ascii_.size()) return ascii_[c];
    for (std::size_t k = 0; k < extended_count_; ++k) {
      if (extended_symbol_[k] == c) return extended_mask_[k];
    }
    return 0;
  }

 private:
  std::array<uint64_t, 128> ascii_{};
  std::array<char32_t, kWord> extended_symbol_;
  std::array<uint64_t, kWord> extended_mask_;
  std::size_t extended_count_ = 0;
};

// Sparse per-symbol masks for longer patterns: for each symbol, the
// (block, mask) pairs of the blocks where it occurs, sorted by block.
class BlockMasks {
 public:
  using Entry = std::pair<std::size_t, uint64_t>;

  explicit BlockMasks(std::u32string_view pattern) {
    ascii_index_.fill(kAbsent);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      auto& list = lists_[slot(pattern[i])];
      const std::size_t block = i / kWord;
      const uint64_t bit = uint64_t{1} << (i % kWord);
      if (list.empty() || list.back().first != block) list.emplace_back(block, 0);
      list.back().second |= bit;
    }
  }

  const std::vector<Entry>* find(char32_t c) const {
    if (c < ascii_index_.size()) {
      return ascii_index_[c] == kAbsent ? nullptr : &lists_[ascii_index_[c]];
    }
    auto it = other_index_.find(c);
    return it == other_index_.end() ? nullptr : &lists_[it->second];
  }

 private:
  static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

  std::size_t slot(char32_t c) {
    std::size_t* index = nullptr;
    if (c < ascii_index_.size()) {
      index = &ascii_index_[c];
    } else {
      index = &other_index_.try_emplace(c, kAbsent).first->second;
    }
    if (*index == kAbsent) {
      *index = lists_.size();
      lists_.emplace_back();
    }
    return *index;
  }

  std::array<std::size_t, 128> ascii_index_{};
  std::unordered_map<char32_t, std::size_t> other_index_;
  std::vector<std::vector<Entry>> lists_;
};

struct Vectors {
  uint64_t vp = ~uint64_t{0};
  uint64_t vn = 0;
};

// Column-wise bit-parallel Levenshtein (Hyyrö's formulation of Myers'
// algorithm) with the pattern along the rows. `eq_source(c)` returns a
// callable giving the match mask of block b for text symbol c; blocks are
// visited in increasing order. `on_column(j, vectors)` sees the vertical
// delta vectors of column j (1-based) after it is computed.
template <class EqSource, class OnColumn>
std::size_t myers(std::size_t m, std::u32string_view text, EqSource&& eq_source, OnColumn&& on_column,
                  std::vector<Vectors>& vectors) {
  const std::size_t blocks = (m + kWord - 1) / kWord;
  const uint64_t last = uint64_t{1} << ((m - 1) % kWord);
  vectors.assign(blocks, Vectors{});
  std::size_t score = m;

  for (std::size_t j = 0; j < text.size(); ++j) {
    auto eq = eq_source(text[j]);
    uint64_t hp_carry = 1;
    uint64_t hn_carry = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
      auto& v = vectors[b];
      const uint64_t x = eq(b) | hn_carry;
      const uint64_t d0 = (((x & v.vp) + v.vp) ^ v.vp) | x | v.vn;
      uint64_t hp = v.vn | ~(d0 | v.vp);
      uint64_t hn = d0 & v.vp;
      const uint64_t hp_in = hp_carry;
      const uint64_t hn_in = hn_carry;
      if (b + 1 < blocks) {
        hp_carry = hp >> 63;
        hn_carry = hn >> 63;
      } else {
        hp_carry = (hp & last) != 0;
        hn_carry = (hn & last) != 0;
      }
      hp = (hp << 1) | hp_in;
      hn = (hn << 1) | hn_in;
      v.vp = hn | ~(d0 | hp);
      v.vn = hp & d0;
    }
    score = score + hp_carry - hn_carry;
    on_column(j + 1, vectors);
  }
  return score;
}

template <class OnColumn>
std::size_t run_myers(std::u32string_view pattern, std::u32string_view text, OnColumn&& on_column,
                      std::vector<Vectors>& vectors) {
  if (pattern.size() <= kWord) {
    const WordMasks masks(pattern);
    return myers(
        pattern.size(), text,
        [&masks](char32_t c) {
          const uint64_t mask = masks.get(c);
          return [mask](std::size_t) { return mask; };
        },
        on_column, vectors);
  }
  const BlockMasks masks(pattern);
  return myers(
      pattern.size(), text,
      [&masks](char32_t c) {
        const auto* list = masks.find(c);
        return [list, cursor = std::size_t{0}](std::size_t b) mutable -> uint64_t {
          if (list == nullptr || cursor >= list->size() || (*list)[cursor].first != b) return 0;
          return (*list)[cursor++].second;
        };
      },
      on_column, vectors);
}

std::u32string normalized_code_points(std::string_view utf8) {
  return unicode::decode(unicode::nfc(utf8));
}

}  // namespace

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  // Common affixes never contribute to the distance.
  const auto prefix = static_cast<std::size_t>(
      std::mismatch(a.begin(), a.end(), b.begin(), b.end()).first - a.begin());
  a.remove_prefix(prefix);
  b.remove_prefix(prefix);
  const auto suffix = static_cast<std::size_t>(
      std::mismatch(a.rbegin(), a.rend(), b.rbegin(), b.rend()).first - a.rbegin());
  a.remove_suffix(suffix);
  b.remove_suffix(suffix);

  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return b.size();

  thread_local std::vector<Vectors> vectors;
  return run_myers(a, b, [](std::size_t, const std::vector<Vectors>&) {}, vectors);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  return edit_distance(normalized_code_points(a), normalized_code_points(b));
}

std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b) {
  std::unordered_map<std::string_view, char32_t> ids;
  auto encode = [&ids](std::span<const std::string> words) {
    std::u32string out;
    out.reserve(words.size());
    for (const auto& w : words) {
      out.push_back(ids.try_emplace(w, static_cast<char32_t>(ids.size())).first->second);
    }
    return out;
  };
  const std::u32string ea = encode(a);
  const std::u32string eb = encode(b);
  return edit_distance(ea, eb);
}

AlignmentPath align_chars(std::u32string_view hyp, std::u32string_view ref) {
  if (hyp.size() > kMaxAlignLength || ref.size() > kMaxAlignLength) {
    throw Error(ErrorKind::InputTooLarge,
                "alignment inputs are limited to " + std::to_string(kMaxAlignLength) + " symbols per side");
  }
  AlignmentPath path;
  path.hyp_length = hyp.size();
  path.ref_length = ref.size();
  const std::size_t m = ref.size();
  const std::size_t n = hyp.size();

  if (m == 0 || n == 0) {
    for (std::size_t i = 0; i < m; ++i) path.ops.push_back({EditKind::Delete, std::nullopt, i});
    for (std::size_t j = 0; j < n; ++j) path.ops.push_back({EditKind::Insert, j, std::nullopt});
    path.cost = m + n;
    return path;
  }

  // columns[j * blocks + b] holds the vertical deltas of DP column j.
  const std::size_t blocks = (m + kWord - 1) / kWord;
  thread_local std::vector<Vectors> columns;
  thread_local std::vector<Vectors> vectors;
  columns.resize((n + 1) * blocks);
  std::fill_n(columns.begin(), blocks, Vectors{});
  run_myers(
      ref, hyp,
      [blocks](std::size_t j, const std::vector<Vectors>& v) {
        std::copy(v.begin(), v.end(), columns.begin() + static_cast<std::ptrdiff_t>(j * blocks));
      },
      vectors);

  // D[i][j] - D[i-1][j]
  auto vertical_delta = [blocks](std::size_t i, std::size_t j) -> long {
    const auto& v = columns[j * blocks + (i - 1) / kWord];
    const uint64_t bit = uint64_t{1} << ((i - 1) % kWord);
    return (v.vp & bit) ? 1 : (v.vn & bit) ? -1 : 0;
  };
  // D[i][j], from the top-row value j and the deltas above row i.
  auto value = [blocks](std::size_t i, std::size_t j) -> long {
    long d = static_cast<long>(j);
    const Vectors* col = &columns[j * blocks];
    std::size_t b = 0;
    for (; (b + 1) * kWord <= i; ++b) {
      d += std::popcount(col[b].vp) - std::popcount(col[b].vn);
    }
    if (const std::size_t rest = i - b * kWord; rest > 0) {
      const uint64_t mask = (uint64_t{1} << rest) - 1;
      d += std::popcount(col[b].vp & mask) - std::popcount(col[b].vn & mask);
    }
    return d;
  };

  std::size_t i = m;
  std::size_t j = n;
  long cur = value(m, n);
  path.cost = static_cast<std::size_t>(cur);
  path.ops.reserve(m + n);
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const long left = value(i, j - 1);
      const long diag = left - vertical_delta(i, j - 1);
      if (ref[i - 1] == hyp[j - 1] && diag == cur) {
        path.ops.push_back({EditKind::Match, j - 1, i - 1});
        --i, --j;
        cur = diag;
        continue;
      }
      if (diag + 1 == cur) {
        path.ops.push_back({EditKind::Substitute, j - 1, i - 1});
        --i, --j;
        cur = diag;
        continue;
      }
      const long up = cur - vertical_delta(i, j);
      if (up + 1 == cur) {
        path.ops.push_back({EditKind::Delete, std::nullopt, i - 1});
        --i;
        cur = up;
        continue;
      }
      path.ops.push_back({EditKind::Insert, j - 1, std::nullopt});
      --j;
      cur = left;
    } else if (i > 0) {
      path.ops.push_back({EditKind::Delete, std::nullopt, i - 1});
      --i;
      --cur;
    } else {
      path.ops.push_back({EditKind::Insert, j - 1, std::nullopt});
      --j;
      --cur;
    }
  }
  std::reverse(path.ops.begin(), path.ops.end());
  return path;
}

AlignmentPath align_chars(std::string_view hyp, std::string_view ref) {
  return align_chars(normalized_code_points(hyp), normalized_code_points(ref));
}

SpanProjector::SpanProjector(const AlignmentPath& path)
    : hyp_at_(path.ref_length, kNone), hyp_before_(path.ref_length + 1, 0) {
  std::size_t consumed = 0;
  for (const auto& op : path.ops) {
    if (op.ref_index) {
      hyp_before_[*op.ref_index] = consumed;
      if (op.hyp_index) hyp_at_[*op.ref_index] = *op.hyp_index;
    }
    if (op.hyp_index) consumed = *op.hyp_index + 1;
  }
  hyp_before_[path.ref_length] = path.hyp_length;
}

CharRange SpanProjector::project(CharRange ref_span) const {
  if (ref_span.begin > ref_span.end || ref_span.end > hyp_at_.size()) {
    throw Error(ErrorKind::SpanOutOfBounds, "[" + std::to_string(ref_span.begin) + ", " +
                                                std::to_string(ref_span.end) + ") outside reference of length " +
                                                std::to_string(hyp_at_.size()));
  }
  std::size_t first = kNone;
  std::size_t last = kNone;
  for (std::size_t r = ref_span.begin; r < ref_span.end; ++r) {
    if (hyp_at_[r] == kNone) continue;
    if (first == kNone) first = hyp_at_[r];
    last = hyp_at_[r];
  }
  if (first == kNone) {
    const std::size_t at = hyp_before_[ref_span.begin];
    return {at, at};
  }
  return {first, last + 1};
}

CharRange project_span(const AlignmentPath& path, CharRange ref_span) {
  return SpanProjector(path).project(ref_span);
}

}  // namespace kvext
