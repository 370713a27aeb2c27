#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "morphseg/bpe.hpp"
#include "morphseg/core.hpp"

namespace morphseg {

// Unigram piece inventory. Probabilities sum to 1; every single character
// seen in training is kept so all training words stay coverable.
struct UnigramVocab {
  std::map<std::string, double> log_prob;
};

struct UlmTrainOptions {
  std::size_t vocab_size = 8000;
  std::size_t seed_max_len = 6;
  // Seed inventory size; 0 means 10x the target vocabulary.
  std::size_t seed_size = 0;
  std::size_t em_iters_per_round = 2;
  double prune_fraction = 0.25;
  std::size_t final_em_iters = 2;
};

// Seeds with frequent substrings, then alternates EM with pruning of the
// lowest-loss-impact pieces until the target size is reached.
UnigramVocab ulm_train(const WordCounts& words, const UlmTrainOptions& opts);

// One full EM iteration (expected piece counts via the segmentation
// lattice, then renormalization). Returns the corpus log-likelihood under
// the parameters in effect when the step started; successive calls must
// never see it decrease.
double ulm_em_step(UnigramVocab& vocab, const WordCounts& words);

// Marginal log-probability of a word: sum over all covers.
double ulm_word_loglik(const std::string& word, const UnigramVocab& vocab);

// Max-probability cover. Ties break toward fewer pieces, then
// leftmost-longest. Throws DataError for uncoverable words.
Segmentation ulm_encode(const std::string& word, const UnigramVocab& vocab);

}  // namespace morphseg
