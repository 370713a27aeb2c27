#include "morphseg/morfessor.hpp"

#include <algorithm>
#include <cmath>

#include "morphseg/error.hpp"
#include "morphseg/logspace.hpp"
#include "morphseg/utf8.hpp"

namespace morphseg {

namespace {

double xlnx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double string_cost(const MorfessorModel& m, const std::string& morph) {
  double cost = m.end_cost;
  for (char32_t cp : utf8_decode(morph)) {
    auto it = m.char_cost.find(utf8_encode(cp));
    cost += it != m.char_cost.end() ? it->second : m.unknown_char_cost;
  }
  return cost;
}

// Incremental bookkeeping around the two cost terms. sum_c_ln_c tracks
// sum over morphs of c*ln(c).
struct CostState {
  MorfessorModel* m;
  double sum_c_ln_c = 0.0;
  // The initialization phase drops the boundary-token term.
  bool with_boundary = true;

  void refresh_corpus_cost() {
    const double b =
        with_boundary ? static_cast<double>(m->boundary_tokens) : 0.0;
    const double big_n = static_cast<double>(m->morph_tokens) + b;
    m->corpus_cost = -(sum_c_ln_c + xlnx(b)) + xlnx(big_n);
  }

  void add(const std::string& morph, std::int64_t k) {
    auto [it, inserted] = m->lexicon.try_emplace(morph, 0);
    if (inserted) m->lexicon_cost += string_cost(*m, morph);
    sum_c_ln_c -= xlnx(static_cast<double>(it->second));
    it->second += k;
    sum_c_ln_c += xlnx(static_cast<double>(it->second));
    m->morph_tokens += k;
    refresh_corpus_cost();
  }

  void remove(const std::string& morph, std::int64_t k) {
    auto it = m->lexicon.find(morph);
    sum_c_ln_c -= xlnx(static_cast<double>(it->second));
    it->second -= k;
    m->morph_tokens -= k;
    if (it->second == 0) {
      m->lexicon_cost -= string_cost(*m, morph);
      m->lexicon.erase(it);
    } else {
      sum_c_ln_c += xlnx(static_cast<double>(it->second));
    }
    refresh_corpus_cost();
  }
};

std::vector<std::string> analyze(CostState& state, const std::u32string& cps,
                                 std::int64_t freq) {
  const std::string whole = utf8_encode(cps);
  state.add(whole, freq);
  const double no_split = state.m->total_cost();
  state.remove(whole, freq);

  double best = no_split;
  std::size_t best_k = 0;
  for (std::size_t k = 1; k < cps.size(); ++k) {
    const std::string left = utf8_encode(cps.substr(0, k));
    const std::string right = utf8_encode(cps.substr(k));
    state.add(left, freq);
    state.add(right, freq);
    const double cost = state.m->total_cost();
    state.remove(left, freq);
    state.remove(right, freq);
    if (cost < best - 1e-12) {
      best = cost;
      best_k = k;
    }
  }
  if (best_k == 0) {
    state.add(whole, freq);
    return {whole};
  }
  std::vector<std::string> morphs =
      analyze(state, cps.substr(0, best_k), freq);
  std::vector<std::string> right =
      analyze(state, cps.substr(best_k), freq);
  morphs.insert(morphs.end(), right.begin(), right.end());
  return morphs;
}

// One greedy pass per call; returns whether any analysis changed.
bool resplit_pass(CostState& state,
                  const std::vector<std::pair<std::string, std::int64_t>>& order,
                  bool record) {
  MorfessorModel& model = *state.m;
  bool changed = false;
  for (const auto& [word, freq] : order) {
    const std::vector<std::string> old = model.analyses[word];
    const double cost_before = model.total_cost();
    for (const std::string& m : old) state.remove(m, freq);
    std::vector<std::string> fresh = analyze(state, utf8_decode(word), freq);
    if (model.total_cost() > cost_before - 1e-9) {
      // Not an improvement: restore the previous analysis.
      for (const std::string& m : fresh) state.remove(m, freq);
      for (const std::string& m : old) state.add(m, freq);
    } else {
      if (fresh != old) {
        changed = true;
        if (record) model.accepted_costs.push_back(model.total_cost());
      }
      model.analyses[word] = std::move(fresh);
    }
  }
  return changed;
}

}  // namespace

double morfessor_recompute_cost(const MorfessorModel& model) {
  double sum = 0.0;
  std::int64_t tokens = 0;
  double lexicon = 0.0;
  for (const auto& [morph, count] : model.lexicon) {
    sum += xlnx(static_cast<double>(count));
    tokens += count;
    lexicon += string_cost(model, morph);
  }
  const double b = static_cast<double>(model.boundary_tokens);
  const double n = static_cast<double>(tokens) + b;
  return -(sum + xlnx(b)) + xlnx(n) + lexicon;
}

MorfessorModel morfessor_train(const WordCounts& words) {
  MorfessorModel model;

  // Frozen character code: add-1 smoothed distribution over the corpus
  // characters (token-weighted) plus an end-of-morph symbol counted once
  // per word type.
  std::map<std::string, std::int64_t> char_counts;
  std::int64_t total_chars = 0;
  std::int64_t types = 0;
  for (const auto& [word, count] : words) {
    if (count <= 0) continue;
    ++types;
    model.boundary_tokens += count;
    for (char32_t cp : utf8_decode(word)) {
      char_counts[utf8_encode(cp)] += count;
      total_chars += count;
    }
  }
  if (types == 0) throw DataError("empty training corpus");
  const double denom = static_cast<double>(
      total_chars + types + static_cast<std::int64_t>(char_counts.size()) + 1);
  for (const auto& [c, count] : char_counts) {
    model.char_cost[c] = -std::log(static_cast<double>(count + 1) / denom);
  }
  model.end_cost = -std::log(static_cast<double>(types + 1) / denom);
  model.unknown_char_cost = -std::log(1.0 / denom);

  CostState state{&model};
  for (const auto& [word, count] : words) {
    if (count <= 0) continue;
    model.analyses[word] = {word};
    state.add(word, count);
  }

  // Resplit passes in frequency order (count desc, then lexicographic).
  std::vector<std::pair<std::string, std::int64_t>> order;
  for (const auto& [word, count] : words) {
    if (count > 0) order.emplace_back(word, count);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });

  const std::size_t max_passes = 20;

  // Initialization: boundary term relaxed so shared stems are reachable
  // one word at a time.
  state.with_boundary = false;
  state.refresh_corpus_cost();
  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    if (!resplit_pass(state, order, /*record=*/false)) break;
  }

  // Refinement under the full cost; re-merges overreached splits.
  state.with_boundary = true;
  state.refresh_corpus_cost();
  model.accepted_costs.push_back(model.total_cost());
  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    if (!resplit_pass(state, order, /*record=*/true)) break;
  }
  return model;
}

Segmentation morfessor_encode(const std::string& word,
                              const MorfessorModel& model) {
  if (word.empty()) throw DataError("cannot encode an empty word");
  const std::u32string cps = utf8_decode(word);
  const std::size_t n = cps.size();
  const double big_n =
      static_cast<double>(model.morph_tokens + model.boundary_tokens);

  auto lexicon_score = [&](const std::string& piece) {
    auto it = model.lexicon.find(piece);
    if (it == model.lexicon.end()) return kLogZero;
    return std::log(static_cast<double>(it->second) / big_n);
  };
  // Unseen characters are priced as a brand-new morph.
  auto fallback_score = [&](const std::string& piece) {
    return -std::log(big_n + 1.0) - string_cost(model, piece);
  };

  struct Cell {
    double score = kLogZero;
    std::size_t pieces = 0;
    std::size_t next = 0;
  };
  std::vector<Cell> dp(n + 1);
  dp[n].score = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    std::string piece;
    for (std::size_t j = i; j < n; ++j) {
      piece += utf8_encode(cps[j]);
      if (dp[j + 1].score == kLogZero) continue;
      double s = lexicon_score(piece);
      if (s == kLogZero && j == i) s = fallback_score(piece);
      if (s == kLogZero) continue;
      const double score = s + dp[j + 1].score;
      const std::size_t pieces = dp[j + 1].pieces + 1;
      Cell& cell = dp[i];
      const bool better =
          cell.score == kLogZero || score > cell.score + 1e-12 ||
          (std::abs(score - cell.score) <= 1e-12 &&
           (pieces < cell.pieces ||
            (pieces == cell.pieces && j + 1 > cell.next)));
      if (better) {
        cell.score = score;
        cell.pieces = pieces;
        cell.next = j + 1;
      }
    }
  }
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < n) {
    const std::size_t end = dp[pos].next;
    out.push_back(utf8_encode(std::u32string_view(cps).substr(pos, end - pos)));
    pos = end;
  }
  return Segmentation(out);
}

}  // namespace morphseg
