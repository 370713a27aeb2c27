#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "morphseg/bpe.hpp"
#include "morphseg/core.hpp"

namespace morphseg {

// Two-part MDL model: a morph lexicon priced per character plus the
// corpus coded with morph-token probabilities (one word-boundary token
// per word token).
struct MorfessorModel {
  // morph -> corpus token count (weighted by word frequency)
  std::map<std::string, std::int64_t> lexicon;
  // Current analysis of each training word type.
  std::map<std::string, std::vector<std::string>> analyses;

  // Frozen character code (nats per character, add-1 smoothed over the
  // training characters plus an end-of-morph symbol).
  std::map<std::string, double> char_cost;
  double end_cost = 0.0;
  double unknown_char_cost = 0.0;

  std::int64_t morph_tokens = 0;    // sum of lexicon counts
  std::int64_t boundary_tokens = 0; // number of word tokens

  double corpus_cost = 0.0;   // nats
  double lexicon_cost = 0.0;  // nats

  // Total cost after each accepted change of the refinement phase;
  // non-increasing by construction.
  std::vector<double> accepted_costs;

  double total_cost() const { return corpus_cost + lexicon_cost; }
};

// Greedy recursive binary splitting over word types in frequency order,
// accepting only changes that lower the total cost; repeated until a full
// pass changes nothing. Search runs in two phases: an initialization pass
// that drops the boundary-token term (so families like walk/walks/walked
// can reach a shared stem one word at a time), then refinement passes
// under the full cost, which also undo overreach.
MorfessorModel morfessor_train(const WordCounts& words);

// Viterbi over lexicon morph probabilities; substrings outside the
// lexicon fall back to per-character pieces with a new-morph penalty.
Segmentation morfessor_encode(const std::string& word,
                              const MorfessorModel& model);

// Cost bookkeeping exposed for tests: recomputes both cost terms from the
// lexicon state instead of trusting the incremental updates.
double morfessor_recompute_cost(const MorfessorModel& model);

}  // namespace morphseg
