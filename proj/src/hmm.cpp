#include "morphseg/hmm.hpp"

#include <algorithm>
#include <cmath>

#include "morphseg/align.hpp"
#include "morphseg/error.hpp"
#include "morphseg/logspace.hpp"
#include "morphseg/utf8.hpp"

namespace morphseg {

namespace {

constexpr int kPrefix = 0;
constexpr int kRoot = 1;
constexpr int kSuffix = 2;
constexpr int kEnd = 3;
constexpr double kParamFloor = 1e-10;

double safe_log(double p) { return p > 0.0 ? std::log(p) : kLogZero; }

// Model compiled into log space with a surface-morph index, fixed for one
// round of lattice computations.
struct Compiled {
  const HmmModel* model;
  double log_start[3];
  double log_trans[3][4];
  // surface morph -> (canonical morpheme, log P(morph | morpheme))
  std::map<std::string, std::vector<std::pair<const std::string*, double>>>
      by_surface;
  // per slot: morpheme -> log emission
  std::array<std::map<std::string, double>, 3> log_emit;

  explicit Compiled(const HmmModel& m) : model(&m) {
    const SlotGrammar& g = m.grammar;
    log_start[kPrefix] = safe_log(g.start_prefix);
    log_start[kRoot] = safe_log(g.start_root);
    log_start[kSuffix] = kLogZero;
    for (auto& row : log_trans) {
      for (double& v : row) v = kLogZero;
    }
    log_trans[kPrefix][kPrefix] = safe_log(g.prefix_to_prefix);
    log_trans[kPrefix][kRoot] = safe_log(g.prefix_to_root);
    log_trans[kRoot][kRoot] = safe_log(g.root_to_root);
    log_trans[kRoot][kSuffix] = safe_log(g.root_to_suffix);
    log_trans[kRoot][kEnd] = safe_log(g.root_to_end);
    log_trans[kSuffix][kSuffix] = safe_log(g.suffix_to_suffix);
    log_trans[kSuffix][kEnd] = safe_log(g.suffix_to_end);
    for (int s = 0; s < 3; ++s) {
      for (const auto& [morpheme, p] : m.lexicon[s]) {
        if (p > 0.0) log_emit[s].emplace(morpheme, std::log(p));
      }
    }
    for (const auto& [morpheme, morphs] : m.emitter) {
      for (const auto& [surface, p] : morphs) {
        if (p > 0.0) {
          by_surface[surface].emplace_back(&morpheme, std::log(p));
        }
      }
    }
  }
};

struct Arc {
  std::size_t begin, end;
  int state;
  const std::string* morpheme;
  const std::string* morph;
  double logw;  // log emit(state, morpheme) + log P(morph | morpheme)
};

struct Lattice {
  std::u32string cps;
  std::vector<Arc> arcs;
  // Arc indices grouped by begin and by end position.
  std::vector<std::vector<std::size_t>> by_begin;
  std::vector<std::vector<std::size_t>> by_end;
};

Lattice build_lattice(const std::string& word, const Compiled& c) {
  Lattice lat;
  lat.cps = utf8_decode(word);
  const std::size_t n = lat.cps.size();
  lat.by_begin.resize(n + 1);
  lat.by_end.resize(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::string surface;
    for (std::size_t j = i; j < n; ++j) {
      surface += utf8_encode(lat.cps[j]);
      auto hit = c.by_surface.find(surface);
      if (hit == c.by_surface.end()) continue;
      for (const auto& [morpheme, log_pmorph] : hit->second) {
        for (int s = 0; s < 3; ++s) {
          auto em = c.log_emit[s].find(*morpheme);
          if (em == c.log_emit[s].end()) continue;
          lat.arcs.push_back(Arc{i, j + 1, s, morpheme, &hit->first,
                                 em->second + log_pmorph});
        }
      }
    }
  }
  for (std::size_t a = 0; a < lat.arcs.size(); ++a) {
    lat.by_begin[lat.arcs[a].begin].push_back(a);
    lat.by_end[lat.arcs[a].end].push_back(a);
  }
  return lat;
}

// alpha[i][s]: log-sum over partial derivations covering cps[0, i) whose
// last segment is in state s.
std::vector<std::array<double, 3>> forward(const Lattice& lat,
                                           const Compiled& c) {
  const std::size_t n = lat.cps.size();
  std::vector<std::array<double, 3>> alpha(
      n + 1, {kLogZero, kLogZero, kLogZero});
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t a : lat.by_end[j]) {
      const Arc& arc = lat.arcs[a];
      double in = kLogZero;
      if (arc.begin == 0) {
        in = c.log_start[arc.state];
      } else {
        for (int sp = 0; sp < 3; ++sp) {
          in = log_add(in, alpha[arc.begin][sp] +
                               c.log_trans[sp][arc.state]);
        }
      }
      if (in == kLogZero) continue;
      alpha[j][arc.state] =
          log_add(alpha[j][arc.state], in + arc.logw);
    }
  }
  return alpha;
}

// beta[i][s]: log-sum over completions from position i given the last
// segment ended in state s.
std::vector<std::array<double, 3>> backward(const Lattice& lat,
                                            const Compiled& c) {
  const std::size_t n = lat.cps.size();
  std::vector<std::array<double, 3>> beta(
      n + 1, {kLogZero, kLogZero, kLogZero});
  for (int s = 0; s < 3; ++s) beta[n][s] = c.log_trans[s][kEnd];
  for (std::size_t i = n; i-- > 0;) {
    // log-sum over arcs leaving i in state s'' of w + beta[end][s'']
    std::array<double, 3> out{kLogZero, kLogZero, kLogZero};
    for (std::size_t a : lat.by_begin[i]) {
      const Arc& arc = lat.arcs[a];
      out[arc.state] = log_add(out[arc.state],
                               arc.logw + beta[arc.end][arc.state]);
    }
    for (int s = 0; s < 3; ++s) {
      double v = kLogZero;
      for (int nxt = 0; nxt < 3; ++nxt) {
        if (out[nxt] == kLogZero) continue;
        v = log_add(v, c.log_trans[s][nxt] + out[nxt]);
      }
      beta[i][s] = v;
    }
  }
  return beta;
}

double lattice_loglik(const Lattice& lat, const Compiled& c,
                      const std::vector<std::array<double, 3>>& alpha) {
  double z = kLogZero;
  for (int s = 0; s < 3; ++s) {
    z = log_add(z, alpha[lat.cps.size()][s] + c.log_trans[s][kEnd]);
  }
  return z;
}

struct Counts {
  double start[3] = {0, 0, 0};
  double trans[3][4] = {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
  std::array<std::map<std::string, double>, 3> emit;
  std::map<std::string, std::map<std::string, double>> morph;
};

void accumulate(const Lattice& lat, const Compiled& c, double weight,
                Counts& counts, double z,
                const std::vector<std::array<double, 3>>& alpha) {
  const std::size_t n = lat.cps.size();
  const auto beta = backward(lat, c);

  // Arc posteriors: emission and morph counts.
  for (const Arc& arc : lat.arcs) {
    double in = kLogZero;
    if (arc.begin == 0) {
      in = c.log_start[arc.state];
    } else {
      for (int sp = 0; sp < 3; ++sp) {
        in = log_add(in, alpha[arc.begin][sp] + c.log_trans[sp][arc.state]);
      }
    }
    if (in == kLogZero || beta[arc.end][arc.state] == kLogZero) continue;
    const double post =
        std::exp(in + arc.logw + beta[arc.end][arc.state] - z) * weight;
    counts.emit[arc.state][*arc.morpheme] += post;
    counts.morph[*arc.morpheme][*arc.morph] += post;
    if (arc.begin == 0) counts.start[arc.state] += post;
  }

  // Transition posteriors at interior positions.
  for (std::size_t i = 1; i < n; ++i) {
    std::array<double, 3> out{kLogZero, kLogZero, kLogZero};
    for (std::size_t a : lat.by_begin[i]) {
      const Arc& arc = lat.arcs[a];
      out[arc.state] = log_add(out[arc.state],
                               arc.logw + beta[arc.end][arc.state]);
    }
    for (int sp = 0; sp < 3; ++sp) {
      if (alpha[i][sp] == kLogZero) continue;
      for (int sn = 0; sn < 3; ++sn) {
        if (c.log_trans[sp][sn] == kLogZero || out[sn] == kLogZero) continue;
        counts.trans[sp][sn] +=
            std::exp(alpha[i][sp] + c.log_trans[sp][sn] + out[sn] - z) *
            weight;
      }
    }
  }
  // End transitions.
  for (int s = 0; s < 3; ++s) {
    if (alpha[n][s] == kLogZero || c.log_trans[s][kEnd] == kLogZero) continue;
    counts.trans[s][kEnd] +=
        std::exp(alpha[n][s] + c.log_trans[s][kEnd] - z) * weight;
  }
}

double normalized_assign(double* slot, double value, double total) {
  const double next = total > 0.0 ? value / total : 0.0;
  const double delta = std::abs(next - *slot);
  *slot = next;
  return delta;
}

// Applies ML re-estimation from counts; returns the largest parameter
// change.
double apply_counts(HmmModel& model, const Counts& counts) {
  SlotGrammar& g = model.grammar;
  double delta = 0.0;
  const double start_total = counts.start[kPrefix] + counts.start[kRoot];
  delta = std::max(delta, normalized_assign(&g.start_prefix,
                                            counts.start[kPrefix], start_total));
  delta = std::max(delta, normalized_assign(&g.start_root,
                                            counts.start[kRoot], start_total));

  const double from_prefix =
      counts.trans[kPrefix][kPrefix] + counts.trans[kPrefix][kRoot];
  delta = std::max(delta, normalized_assign(&g.prefix_to_prefix,
                                            counts.trans[kPrefix][kPrefix],
                                            from_prefix));
  delta = std::max(delta, normalized_assign(&g.prefix_to_root,
                                            counts.trans[kPrefix][kRoot],
                                            from_prefix));
  const double from_root = counts.trans[kRoot][kRoot] +
                           counts.trans[kRoot][kSuffix] +
                           counts.trans[kRoot][kEnd];
  delta = std::max(delta, normalized_assign(&g.root_to_root,
                                            counts.trans[kRoot][kRoot],
                                            from_root));
  delta = std::max(delta, normalized_assign(&g.root_to_suffix,
                                            counts.trans[kRoot][kSuffix],
                                            from_root));
  delta = std::max(delta, normalized_assign(&g.root_to_end,
                                            counts.trans[kRoot][kEnd],
                                            from_root));
  const double from_suffix =
      counts.trans[kSuffix][kSuffix] + counts.trans[kSuffix][kEnd];
  delta = std::max(delta, normalized_assign(&g.suffix_to_suffix,
                                            counts.trans[kSuffix][kSuffix],
                                            from_suffix));
  delta = std::max(delta, normalized_assign(&g.suffix_to_end,
                                            counts.trans[kSuffix][kEnd],
                                            from_suffix));

  for (int s = 0; s < 3; ++s) {
    double total = 0.0;
    for (const auto& [m, cnt] : counts.emit[s]) total += cnt;
    for (auto& [m, p] : model.lexicon[s]) {
      auto it = counts.emit[s].find(m);
      const double cnt = it == counts.emit[s].end() ? 0.0 : it->second;
      const double next = total > 0.0 ? cnt / total : p;
      delta = std::max(delta, std::abs(next - p));
      p = next;
    }
  }
  for (auto& [morpheme, morphs] : model.emitter) {
    auto mit = counts.morph.find(morpheme);
    double total = 0.0;
    if (mit != counts.morph.end()) {
      for (const auto& [surface, cnt] : mit->second) total += cnt;
    }
    if (total <= 0.0) continue;  // morpheme unused this round
    for (auto& [surface, p] : morphs) {
      double cnt = 0.0;
      if (mit != counts.morph.end()) {
        auto sit = mit->second.find(surface);
        if (sit != mit->second.end()) cnt = sit->second;
      }
      const double next = cnt / total;
      delta = std::max(delta, std::abs(next - p));
      p = next;
    }
  }
  return delta;
}

template <typename Map>
void floor_prune_map(Map& m) {
  double total = 0.0;
  for (auto it = m.begin(); it != m.end();) {
    if (it->second < kParamFloor) {
      it = m.erase(it);
    } else {
      total += it->second;
      ++it;
    }
  }
  if (total > 0.0) {
    for (auto& [k, v] : m) v /= total;
  }
}

void floor_prune(HmmModel& model) {
  for (int s = 0; s < 3; ++s) floor_prune_map(model.lexicon[s]);
  for (auto it = model.emitter.begin(); it != model.emitter.end();) {
    floor_prune_map(it->second);
    if (it->second.empty()) {
      it = model.emitter.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace

double hmm_word_loglik(const std::string& word, const HmmModel& model) {
  const Compiled c(model);
  const Lattice lat = build_lattice(word, c);
  const auto alpha = forward(lat, c);
  const double z = lattice_loglik(lat, c, alpha);
  if (z == kLogZero) {
    throw DataError("word \"" + word + "\" is not derivable under the model");
  }
  return z;
}

EmStats em_train(HmmModel& model, const WordCounts& words,
                 const EmOptions& opts) {
  EmStats stats;
  for (std::size_t iter = 0; iter < opts.max_iters; ++iter) {
    const Compiled c(model);
    Counts counts;
    double ll = 0.0;
    for (const auto& [word, count] : words) {
      if (count <= 0) continue;
      const Lattice lat = build_lattice(word, c);
      const auto alpha = forward(lat, c);
      const double z = lattice_loglik(lat, c, alpha);
      if (z == kLogZero) {
        throw DataError("word \"" + word +
                        "\" is not derivable under the model");
      }
      ll += static_cast<double>(count) * z;
      accumulate(lat, c, static_cast<double>(count), counts, z, alpha);
    }
    stats.loglik.push_back(ll);
    stats.last_param_delta = apply_counts(model, counts);
    stats.iterations = iter + 1;
    if (iter > 0 &&
        std::abs(stats.loglik[iter] - stats.loglik[iter - 1]) < opts.tol) {
      break;
    }
  }
  // Likelihood under the final parameters.
  {
    const Compiled c(model);
    double ll = 0.0;
    for (const auto& [word, count] : words) {
      if (count <= 0) continue;
      const Lattice lat = build_lattice(word, c);
      const auto alpha = forward(lat, c);
      ll += static_cast<double>(count) * lattice_loglik(lat, c, alpha);
    }
    stats.final_loglik = ll;
  }
  floor_prune(model);
  return stats;
}

HmmDecode viterbi_segment(const std::string& word, const HmmModel& model) {
  const Compiled c(model);
  const Lattice lat = build_lattice(word, c);
  const std::size_t n = lat.cps.size();

  struct Cell {
    double score = kLogZero;
    std::size_t arc = 0;
    int prev_state = -1;
    bool reachable = false;
  };
  // best[i][s]: best partial derivation of cps[0, i) ending in state s.
  std::vector<std::array<Cell, 3>> best(n + 1);

  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t a : lat.by_end[j]) {
      const Arc& arc = lat.arcs[a];
      double in = kLogZero;
      int prev = -1;
      if (arc.begin == 0) {
        in = c.log_start[arc.state];
      } else {
        for (int sp = 0; sp < 3; ++sp) {
          if (!best[arc.begin][sp].reachable) continue;
          const double v =
              best[arc.begin][sp].score + c.log_trans[sp][arc.state];
          if (v > in) {
            in = v;
            prev = sp;
          }
        }
      }
      if (in == kLogZero) continue;
      const double score = in + arc.logw;
      Cell& cell = best[j][arc.state];
      if (!cell.reachable || score > cell.score) {
        cell.score = score;
        cell.arc = a;
        cell.prev_state = prev;
        cell.reachable = true;
      }
    }
  }

  int final_state = -1;
  double final_score = kLogZero;
  for (int s = 0; s < 3; ++s) {
    if (!best[n][s].reachable || c.log_trans[s][kEnd] == kLogZero) continue;
    const double v = best[n][s].score + c.log_trans[s][kEnd];
    if (v > final_score) {
      final_score = v;
      final_state = s;
    }
  }

  if (final_state < 0 || n == 0) {
    // Whole-word root fallback for underivable input.
    HmmDecode out(Segmentation({word}));
    out.morphs = {word};
    out.states = {Slot::root};
    out.logprob = kLogZero;
    out.fallback = true;
    return out;
  }

  std::vector<const Arc*> path;
  std::size_t pos = n;
  int state = final_state;
  while (pos > 0) {
    const Cell& cell = best[pos][state];
    const Arc& arc = lat.arcs[cell.arc];
    path.push_back(&arc);
    pos = arc.begin;
    state = cell.prev_state;
  }
  std::reverse(path.begin(), path.end());

  std::vector<Morpheme> morphemes;
  std::vector<std::string> morphs;
  std::vector<Slot> states;
  for (const Arc* arc : path) {
    morphemes.emplace_back(*arc->morpheme);
    morphs.push_back(*arc->morph);
    states.push_back(static_cast<Slot>(arc->state));
  }
  HmmDecode out(Segmentation(std::move(morphemes)));
  out.morphs = std::move(morphs);
  out.states = std::move(states);
  out.logprob = final_score;
  return out;
}

namespace {

void smooth_normalize(std::map<std::string, double>& counts) {
  double total = 0.0;
  for (const auto& [k, v] : counts) total += v + 0.1;
  for (auto& [k, v] : counts) v = (v + 0.1) / total;
}

}  // namespace

HmmModel hmm_init(const Dataset& train, const HmmInitOptions& opts) {
  if (train.kind != DatasetKind::word_level || train.words.empty()) {
    throw DataError("supervised HMM init needs a nonempty word-level dataset");
  }
  HmmModel model;
  model.language = train.language;

  // Known roots: morphemes that occur as standalone words.
  std::set<std::string> known_roots;
  for (const WordEntry& e : train.words) {
    if (e.segmentation && e.segmentation->size() == 1) {
      known_roots.insert((*e.segmentation)[0].str());
    }
  }

  std::array<std::map<std::string, double>, 3> emit_counts;
  std::map<std::string, std::map<std::string, double>> morph_counts;
  double start_counts[3] = {0, 0, 0};
  double trans_counts[3][4] = {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};

  std::vector<std::vector<int>> state_seqs;
  for (const WordEntry& e : train.words) {
    if (!e.segmentation) {
      throw DataError("entry \"" + e.word + "\" has no gold segmentation");
    }
    const Segmentation& seg = *e.segmentation;
    const std::size_t k = seg.size();

    // Root flags from standalone evidence, falling back to the longest
    // morpheme; the root block is made contiguous.
    std::vector<bool> is_root(k, false);
    bool any = false;
    for (std::size_t i = 0; i < k; ++i) {
      if (known_roots.count(seg[i].str())) {
        is_root[i] = true;
        any = true;
      }
    }
    if (!any) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < k; ++i) {
        if (utf8_length(seg[i].str()) > utf8_length(seg[best].str())) best = i;
      }
      is_root[best] = true;
    }
    if (e.category && !e.category->compound) {
      // A single root: the longest flagged morpheme, earliest on ties.
      std::size_t best = 0;
      bool found = false;
      for (std::size_t i = 0; i < k; ++i) {
        if (is_root[i] &&
            (!found ||
             utf8_length(seg[i].str()) > utf8_length(seg[best].str()))) {
          best = i;
          found = true;
        }
      }
      std::fill(is_root.begin(), is_root.end(), false);
      is_root[best] = true;
    }
    std::size_t first_root = k, last_root = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (is_root[i]) {
        first_root = std::min(first_root, i);
        last_root = std::max(last_root, i);
      }
    }

    std::vector<int> states(k);
    for (std::size_t i = 0; i < k; ++i) {
      states[i] = i < first_root ? kPrefix : (i <= last_root ? kRoot : kSuffix);
    }
    state_seqs.push_back(states);

    start_counts[states.front()] += 1.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      trans_counts[states[i]][states[i + 1]] += 1.0;
    }
    trans_counts[states.back()][kEnd] += 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      emit_counts[states[i]][seg[i].str()] += 1.0;
    }

    // Surface morphs from the character alignment, within the edit bound.
    const AlignedEntry aligned = align_canonical(e.word, seg);
    const std::u32string cps = utf8_decode(e.word);
    for (std::size_t i = 0; i < k; ++i) {
      const auto [lo, hi] = aligned.spans[i];
      if (lo >= hi) continue;
      if (aligned.costs[i] > opts.max_morph_edit) continue;
      const std::string surface =
          utf8_encode(std::u32string_view(cps).substr(lo, hi - lo));
      morph_counts[seg[i].str()][surface] += 1.0;
    }
  }

  if (emit_counts[kRoot].empty()) {
    throw DataError("no root candidates in the training data");
  }

  // Identity morphs are always available.
  for (int s = 0; s < 3; ++s) {
    for (const auto& [morpheme, cnt] : emit_counts[s]) {
      morph_counts[morpheme];  // ensure the morpheme has a morph table
    }
  }
  for (auto& [morpheme, morphs] : morph_counts) {
    morphs[morpheme] += 0.0;  // identity entry, smoothed below
  }

  // Normalize with add-0.1 over the observed support.
  const double start_total = start_counts[kPrefix] + start_counts[kRoot] + 0.2;
  model.grammar.start_prefix = (start_counts[kPrefix] + 0.1) / start_total;
  model.grammar.start_root = (start_counts[kRoot] + 0.1) / start_total;

  auto norm_trans = [&trans_counts](int from, std::initializer_list<int> tos,
                                    std::initializer_list<double*> slots) {
    double total = 0.0;
    auto to_it = tos.begin();
    for (; to_it != tos.end(); ++to_it) {
      if (trans_counts[from][*to_it] > 0.0) {
        total += trans_counts[from][*to_it] + 0.1;
      }
    }
    auto slot_it = slots.begin();
    to_it = tos.begin();
    for (; to_it != tos.end(); ++to_it, ++slot_it) {
      const double c = trans_counts[from][*to_it];
      **slot_it = (c > 0.0 && total > 0.0) ? (c + 0.1) / total : 0.0;
    }
  };
  norm_trans(kPrefix, {kPrefix, kRoot},
             {&model.grammar.prefix_to_prefix, &model.grammar.prefix_to_root});
  norm_trans(kRoot, {kRoot, kSuffix, kEnd},
             {&model.grammar.root_to_root, &model.grammar.root_to_suffix,
              &model.grammar.root_to_end});
  norm_trans(kSuffix, {kSuffix, kEnd},
             {&model.grammar.suffix_to_suffix, &model.grammar.suffix_to_end});

  for (int s = 0; s < 3; ++s) {
    model.lexicon[s] = emit_counts[s];
    smooth_normalize(model.lexicon[s]);
  }
  for (auto& [morpheme, morphs] : morph_counts) {
    smooth_normalize(morphs);
    model.emitter[morpheme] = morphs;
  }

  // Whole-word root fallback: any training word that still has no
  // derivation is added to the root lexicon.
  std::vector<std::string> underivable;
  {
    const Compiled c(model);
    for (const WordEntry& e : train.words) {
      const Lattice lat = build_lattice(e.word, c);
      const auto alpha = forward(lat, c);
      if (lattice_loglik(lat, c, alpha) == kLogZero) {
        underivable.push_back(e.word);
      }
    }
  }
  if (!underivable.empty()) {
    std::map<std::string, double> roots = emit_counts[kRoot];
    for (const std::string& w : underivable) roots[w] += 0.0;
    smooth_normalize(roots);
    model.lexicon[kRoot] = roots;
    for (const std::string& w : underivable) {
      std::map<std::string, double>& morphs = model.emitter[w];
      if (morphs.empty()) morphs[w] = 1.0;
    }
    // The single-root path must be open: a word must be able to stop
    // right after ROOT even when no training word did.
    if (model.grammar.root_to_end <= 0.0) {
      double total = 0.1;  // the forced END share
      for (int to : {kRoot, kSuffix}) {
        if (trans_counts[kRoot][to] > 0.0) total += trans_counts[kRoot][to] + 0.1;
      }
      auto share = [&](int to) {
        return trans_counts[kRoot][to] > 0.0
                   ? (trans_counts[kRoot][to] + 0.1) / total
                   : 0.0;
      };
      model.grammar.root_to_root = share(kRoot);
      model.grammar.root_to_suffix = share(kSuffix);
      model.grammar.root_to_end = 0.1 / total;
    }
  }
  return model;
}

HmmModel hmm_init_unsupervised(const WordCounts& words,
                               const HmmInitOptions& opts) {
  if (words.empty()) {
    throw DataError("unsupervised HMM init needs a nonempty corpus");
  }
  HmmModel model;

  std::map<std::string, std::int64_t> prefix_freq, suffix_freq;
  for (const auto& [word, count] : words) {
    if (count <= 0) continue;
    const std::u32string cps = utf8_decode(word);
    const std::size_t n = cps.size();
    for (std::size_t len = 1; len <= opts.max_affix_len && len < n; ++len) {
      prefix_freq[utf8_encode(std::u32string_view(cps).substr(0, len))] +=
          count;
      suffix_freq[utf8_encode(std::u32string_view(cps).substr(n - len))] +=
          count;
    }
  }
  auto top = [&](const std::map<std::string, std::int64_t>& freq) {
    std::vector<std::pair<std::string, std::int64_t>> items(freq.begin(),
                                                            freq.end());
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) {
                       if (a.second != b.second) return a.second > b.second;
                       return a.first < b.first;
                     });
    if (items.size() > opts.max_candidates) items.resize(opts.max_candidates);
    std::set<std::string> out;
    for (const auto& [affix, f] : items) out.insert(affix);
    return out;
  };
  const std::set<std::string> prefixes = top(prefix_freq);
  const std::set<std::string> suffixes = top(suffix_freq);

  // Root candidates: whole words plus affix-stripped residuals.
  std::set<std::string> roots;
  for (const auto& [word, count] : words) {
    if (count <= 0) continue;
    roots.insert(word);
    const std::u32string cps = utf8_decode(word);
    const std::size_t n = cps.size();
    for (std::size_t plen = 0; plen <= opts.max_affix_len && plen < n;
         ++plen) {
      if (plen > 0 &&
          !prefixes.count(utf8_encode(std::u32string_view(cps).substr(0, plen)))) {
        continue;
      }
      for (std::size_t slen = 0; plen + slen < n && slen <= opts.max_affix_len;
           ++slen) {
        if (slen > 0 &&
            !suffixes.count(
                utf8_encode(std::u32string_view(cps).substr(n - slen)))) {
          continue;
        }
        if (plen == 0 && slen == 0) continue;
        roots.insert(
            utf8_encode(std::u32string_view(cps).substr(plen, n - plen - slen)));
      }
    }
  }

  auto uniform = [](const std::set<std::string>& items,
                    std::map<std::string, double>& out) {
    if (items.empty()) return;
    const double p = 1.0 / static_cast<double>(items.size());
    for (const std::string& s : items) out[s] = p;
  };
  uniform(prefixes, model.lexicon[kPrefix]);
  uniform(roots, model.lexicon[kRoot]);
  uniform(suffixes, model.lexicon[kSuffix]);

  // Identity-only emitter at this stage.
  for (int s = 0; s < 3; ++s) {
    for (const auto& [m, p] : model.lexicon[s]) model.emitter[m][m] = 1.0;
  }

  const bool with_prefix = !prefixes.empty();
  const bool with_suffix = !suffixes.empty();
  model.grammar.start_prefix = with_prefix ? 0.5 : 0.0;
  model.grammar.start_root = with_prefix ? 0.5 : 1.0;
  model.grammar.prefix_to_prefix = with_prefix ? 0.5 : 0.0;
  model.grammar.prefix_to_root = with_prefix ? 0.5 : 0.0;
  if (with_suffix) {
    model.grammar.root_to_root = 1.0 / 3.0;
    model.grammar.root_to_suffix = 1.0 / 3.0;
    model.grammar.root_to_end = 1.0 / 3.0;
    model.grammar.suffix_to_suffix = 0.5;
    model.grammar.suffix_to_end = 0.5;
  } else {
    model.grammar.root_to_root = 0.5;
    model.grammar.root_to_suffix = 0.0;
    model.grammar.root_to_end = 0.5;
  }
  return model;
}

}  // namespace morphseg
