#include "morphseg/align.hpp"

#include <algorithm>
#include <limits>

#include "morphseg/utf8.hpp"

namespace morphseg {

std::int64_t levenshtein_u32(std::u32string_view a, std::u32string_view b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::int64_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<std::int64_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const std::int64_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

namespace {

// (total cost, sum of squared span costs), compared lexicographically.
struct CostPair {
  std::int64_t cost;
  std::int64_t sq;

  CostPair operator+(const CostPair& o) const {
    return {cost + o.cost, sq + o.sq};
  }
  bool operator<(const CostPair& o) const {
    return cost != o.cost ? cost < o.cost : sq < o.sq;
  }
  bool operator==(const CostPair& o) const {
    return cost == o.cost && sq == o.sq;
  }
};

constexpr CostPair kInfeasible{std::numeric_limits<std::int64_t>::max() / 4,
                               std::numeric_limits<std::int64_t>::max() / 4};

}  // namespace

AlignedEntry align_canonical(const std::string& word, const Segmentation& gold) {
  const std::u32string cps = utf8_decode(word);
  const std::size_t n = cps.size();
  const std::size_t k = gold.size();

  std::vector<std::u32string> morphemes;
  morphemes.reserve(k);
  for (const Morpheme& m : gold.morphemes()) {
    morphemes.push_back(utf8_decode(m.str()));
  }

  auto span_cost = [&](std::size_t i, std::size_t lo,
                       std::size_t hi) -> CostPair {
    const std::int64_t c = levenshtein_u32(
        std::u32string_view(cps).substr(lo, hi - lo), morphemes[i]);
    return {c, c * c};
  };

  // S[i][j]: best cost of aligning morphemes i..k to characters j..n.
  std::vector<std::vector<CostPair>> suffix(
      k + 1, std::vector<CostPair>(n + 1, kInfeasible));
  suffix[k][n] = {0, 0};
  for (std::size_t i = k; i-- > 0;) {
    for (std::size_t j = 0; j <= n; ++j) {
      CostPair best = kInfeasible;
      for (std::size_t e = j; e <= n; ++e) {
        if (suffix[i + 1][e] == kInfeasible) continue;
        const CostPair c = span_cost(i, j, e) + suffix[i + 1][e];
        if (c < best) best = c;
      }
      suffix[i][j] = best;
    }
  }

  AlignedEntry out;
  const CostPair total = suffix[0][0];
  // Forward reconstruction keeps only boundary choices consistent with
  // the optimum. Taking the largest feasible end at each step prefers
  // long early spans, which keeps edits (gemination, deleted stem
  // vowels) attached to the morpheme that caused them.
  std::size_t pos = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t e = n + 1; e-- > pos;) {
      if (suffix[i + 1][e] == kInfeasible) continue;
      const CostPair c = span_cost(i, pos, e) + suffix[i + 1][e];
      if (c == suffix[i][pos]) {
        out.spans.emplace_back(pos, e);
        out.costs.push_back(span_cost(i, pos, e).cost);
        pos = e;
        break;
      }
    }
  }
  out.total_cost = total.cost;
  return out;
}

}  // namespace morphseg
