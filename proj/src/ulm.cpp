#include "morphseg/ulm.hpp"

#include <algorithm>
#include <cmath>

#include "morphseg/error.hpp"
#include "morphseg/logspace.hpp"
#include "morphseg/utf8.hpp"

namespace morphseg {

namespace {

// A word as code points plus, per start position, the pieces that match.
struct WordLattice {
  std::u32string cps;
  // arcs[i]: (end position, piece string) for pieces matching at i.
  std::vector<std::vector<std::pair<std::size_t, const std::string*>>> arcs;
};

WordLattice build_lattice(const std::string& word, const UnigramVocab& vocab) {
  WordLattice lat;
  lat.cps = utf8_decode(word);
  const std::size_t n = lat.cps.size();
  lat.arcs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string piece;
    for (std::size_t j = i; j < n; ++j) {
      piece += utf8_encode(lat.cps[j]);
      auto it = vocab.log_prob.find(piece);
      if (it != vocab.log_prob.end() && it->second != kLogZero) {
        lat.arcs[i].emplace_back(j + 1, &it->first);
      }
    }
  }
  return lat;
}

// Forward scores alpha[i] = log sum of all covers of cps[0, i).
std::vector<double> forward(const WordLattice& lat, const UnigramVocab& vocab) {
  const std::size_t n = lat.cps.size();
  std::vector<double> alpha(n + 1, kLogZero);
  alpha[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] == kLogZero) continue;
    for (const auto& [end, piece] : lat.arcs[i]) {
      alpha[end] =
          log_add(alpha[end], alpha[i] + vocab.log_prob.at(*piece));
    }
  }
  return alpha;
}

void normalize(std::map<std::string, double>& counts,
               UnigramVocab& vocab) {
  double total = 0.0;
  for (const auto& [piece, c] : counts) total += c;
  if (total <= 0.0) throw DataError("no piece received any expected count");
  UnigramVocab next;
  for (const auto& [piece, c] : counts) {
    // Zero counts get a representable floor so log-probabilities stay
    // finite (model files are plain JSON); 1e-300 is inert in the math.
    next.log_prob[piece] = std::log(std::max(c, 1e-300) / total);
  }
  vocab = std::move(next);
}

}  // namespace

double ulm_word_loglik(const std::string& word, const UnigramVocab& vocab) {
  const WordLattice lat = build_lattice(word, vocab);
  const std::vector<double> alpha = forward(lat, vocab);
  if (alpha.back() == kLogZero) {
    throw DataError("word \"" + word + "\" is not coverable by the vocabulary");
  }
  return alpha.back();
}

double ulm_em_step(UnigramVocab& vocab, const WordCounts& words) {
  std::map<std::string, double> expected;
  for (const auto& [piece, lp] : vocab.log_prob) expected[piece] = 0.0;
  double corpus_ll = 0.0;

  for (const auto& [word, count] : words) {
    if (count <= 0) continue;
    const WordLattice lat = build_lattice(word, vocab);
    const std::size_t n = lat.cps.size();
    const std::vector<double> alpha = forward(lat, vocab);
    if (alpha[n] == kLogZero) {
      throw DataError("word \"" + word +
                      "\" is not coverable by the vocabulary");
    }
    std::vector<double> beta(n + 1, kLogZero);
    beta[n] = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      for (const auto& [end, piece] : lat.arcs[i]) {
        if (beta[end] == kLogZero) continue;
        beta[i] = log_add(beta[i],
                          vocab.log_prob.at(*piece) + beta[end]);
      }
    }
    const double z = alpha[n];
    corpus_ll += static_cast<double>(count) * z;
    for (std::size_t i = 0; i < n; ++i) {
      if (alpha[i] == kLogZero) continue;
      for (const auto& [end, piece] : lat.arcs[i]) {
        if (beta[end] == kLogZero) continue;
        const double post =
            std::exp(alpha[i] + vocab.log_prob.at(*piece) + beta[end] - z);
        expected[*piece] += static_cast<double>(count) * post;
      }
    }
  }
  normalize(expected, vocab);
  return corpus_ll;
}

namespace {

struct SeedPiece {
  std::string text;
  std::int64_t freq;
  std::size_t cp_len;
};

UnigramVocab seed_vocab(const WordCounts& words, const UlmTrainOptions& opts) {
  std::map<std::string, std::int64_t> substr_freq;
  std::map<std::string, std::int64_t> char_freq;
  for (const auto& [word, count] : words) {
    if (count <= 0) continue;
    const std::u32string cps = utf8_decode(word);
    for (std::size_t i = 0; i < cps.size(); ++i) {
      std::string piece;
      for (std::size_t j = i; j < cps.size() && j - i < opts.seed_max_len;
           ++j) {
        piece += utf8_encode(cps[j]);
        if (j == i) {
          char_freq[piece] += count;
        } else {
          substr_freq[piece] += count;
        }
      }
    }
  }
  const std::size_t seed_size =
      opts.seed_size > 0 ? opts.seed_size
                         : std::max<std::size_t>(opts.vocab_size * 10,
                                                 char_freq.size());
  if (opts.vocab_size < char_freq.size()) {
    throw ConfigError("vocab_size " + std::to_string(opts.vocab_size) +
                      " is below the alphabet size " +
                      std::to_string(char_freq.size()));
  }

  std::vector<SeedPiece> candidates;
  for (const auto& [piece, freq] : substr_freq) {
    candidates.push_back({piece, freq, utf8_length(piece)});
  }
  // Most frequent first; frequency ties favour longer pieces, then
  // lexicographic order for determinism.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const SeedPiece& a, const SeedPiece& b) {
                     if (a.freq != b.freq) return a.freq > b.freq;
                     if (a.cp_len != b.cp_len) return a.cp_len > b.cp_len;
                     return a.text < b.text;
                   });

  std::map<std::string, double> weight;
  for (const auto& [piece, freq] : char_freq) {
    weight[piece] = static_cast<double>(freq);
  }
  for (const SeedPiece& c : candidates) {
    if (weight.size() >= seed_size) break;
    // Weight multi-character seeds by total covered characters.
    weight[c.text] = static_cast<double>(c.freq) *
                     static_cast<double>(c.cp_len);
  }

  double total = 0.0;
  for (const auto& [piece, w] : weight) total += w;
  UnigramVocab vocab;
  for (const auto& [piece, w] : weight) {
    vocab.log_prob[piece] = std::log(w / total);
  }
  return vocab;
}

// Loss of removing a piece: its expected count times how much worse its
// best alternative cover is. Single characters are never pruned.
struct PruneLoss {
  std::string piece;
  double loss;
};

double best_alternative(const std::string& piece, const UnigramVocab& vocab) {
  const std::u32string cps = utf8_decode(piece);
  const std::size_t n = cps.size();
  std::vector<double> best(n + 1, kLogZero);
  best[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (best[i] == kLogZero) continue;
    std::string sub;
    for (std::size_t j = i; j < n; ++j) {
      sub += utf8_encode(cps[j]);
      if (i == 0 && j == n - 1) continue;  // the piece itself
      auto it = vocab.log_prob.find(sub);
      if (it == vocab.log_prob.end() || it->second == kLogZero) continue;
      best[j + 1] = std::max(best[j + 1], best[i] + it->second);
    }
  }
  return best[n];
}

}  // namespace

UnigramVocab ulm_train(const WordCounts& words, const UlmTrainOptions& opts) {
  if (words.empty()) throw DataError("empty training corpus");
  UnigramVocab vocab = seed_vocab(words, opts);

  std::set<std::string> chars;
  for (const auto& [word, count] : words) {
    if (count <= 0) continue;
    for (char32_t cp : utf8_decode(word)) chars.insert(utf8_encode(cp));
  }

  while (vocab.log_prob.size() > opts.vocab_size) {
    for (std::size_t it = 0; it < opts.em_iters_per_round; ++it) {
      ulm_em_step(vocab, words);
    }
    // Expected counts under the current model, for the loss estimates.
    UnigramVocab counted = vocab;
    ulm_em_step(counted, words);

    std::vector<PruneLoss> losses;
    for (const auto& [piece, lp] : vocab.log_prob) {
      if (chars.count(piece)) continue;
      const double alt = best_alternative(piece, vocab);
      const double count = std::exp(counted.log_prob.at(piece));
      if (lp == kLogZero) {
        losses.push_back({piece, kLogZero});
        continue;
      }
      // alt == kLogZero would disconnect words; keep such pieces.
      if (alt == kLogZero) continue;
      losses.push_back({piece, count * (lp - alt)});
    }
    if (losses.empty()) break;
    std::stable_sort(losses.begin(), losses.end(),
                     [](const PruneLoss& a, const PruneLoss& b) {
                       if (a.loss != b.loss) return a.loss < b.loss;
                       return a.piece < b.piece;
                     });
    const std::size_t excess = vocab.log_prob.size() - opts.vocab_size;
    const std::size_t drop = std::max<std::size_t>(
        1, std::min(losses.size(),
                    std::min(excess,
                             static_cast<std::size_t>(
                                 static_cast<double>(vocab.log_prob.size()) *
                                 opts.prune_fraction))));
    for (std::size_t i = 0; i < drop; ++i) {
      vocab.log_prob.erase(losses[i].piece);
    }
    // Renormalize the survivors.
    double total = 0.0;
    for (const auto& [piece, lp] : vocab.log_prob) total += std::exp(lp);
    for (auto& [piece, lp] : vocab.log_prob) {
      lp = lp == kLogZero ? kLogZero : lp - std::log(total);
    }
  }

  for (std::size_t it = 0; it < opts.final_em_iters; ++it) {
    ulm_em_step(vocab, words);
  }
  return vocab;
}

Segmentation ulm_encode(const std::string& word, const UnigramVocab& vocab) {
  if (word.empty()) throw DataError("cannot encode an empty word");
  const WordLattice lat = build_lattice(word, vocab);
  const std::size_t n = lat.cps.size();

  // Right-to-left so that ties can prefer the longest first piece: at
  // equal (log-probability, piece count), the larger end wins.
  struct Cell {
    double logp = kLogZero;
    std::size_t pieces = 0;
    std::size_t next = 0;  // end of the chosen piece
  };
  std::vector<Cell> dp(n + 1);
  dp[n].logp = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    for (const auto& [end, piece] : lat.arcs[i]) {
      if (dp[end].logp == kLogZero) continue;
      const double logp = vocab.log_prob.at(*piece) + dp[end].logp;
      const std::size_t pieces = dp[end].pieces + 1;
      Cell& cell = dp[i];
      const bool better =
          cell.logp == kLogZero || logp > cell.logp + 1e-12 ||
          (std::abs(logp - cell.logp) <= 1e-12 &&
           (pieces < cell.pieces ||
            (pieces == cell.pieces && end > cell.next)));
      if (better) {
        cell.logp = logp;
        cell.pieces = pieces;
        cell.next = end;
      }
    }
  }
  if (dp[0].logp == kLogZero) {
    throw DataError("word \"" + word + "\" is not coverable by the vocabulary");
  }
  std::vector<std::string> pieces;
  std::size_t pos = 0;
  while (pos < n) {
    const std::size_t end = dp[pos].next;
    pieces.push_back(utf8_encode(
        std::u32string_view(lat.cps).substr(pos, end - pos)));
    pos = end;
  }
  return Segmentation(pieces);
}

}  // namespace morphseg
