#pragma once

#include <set>
#include <string>

#include "morphseg/bpe.hpp"
#include "morphseg/core.hpp"

namespace morphseg {

// Pieces matched at the start of a word vs. continuation pieces matched
// only after the first piece. Both stored without markers.
struct WordPieceVocab {
  std::set<std::string> initial;
  std::set<std::string> continuation;
};

// Greedy longest-match-first, left to right. Throws DataError when no
// piece matches at some position (missing character).
Segmentation wordpiece_encode(const std::string& word,
                              const WordPieceVocab& vocab);

// Likelihood-ratio pair merging (pair_freq / (left_freq * right_freq))
// until `vocab_size` distinct symbols exist. Experimental: the encoding
// side is the contract-bearing part.
WordPieceVocab wordpiece_train(const WordCounts& words,
                               std::size_t vocab_size);

}  // namespace morphseg
