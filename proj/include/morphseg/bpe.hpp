#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "morphseg/core.hpp"

namespace morphseg {

// Word types with their corpus frequencies.
using WordCounts = std::map<std::string, std::int64_t>;

struct MergeTable {
  std::vector<std::pair<std::string, std::string>> merges;
  std::set<std::string> alphabet;
};

// Greedy pair merging: each iteration merges the most frequent adjacent
// symbol pair (frequency over word types weighted by corpus frequency),
// ties broken by lexicographic (left, right). Stops early when no pair
// remains.
MergeTable bpe_train(const WordCounts& words, std::size_t num_merges);

// Applies the merges in table order to the character sequence. Unknown
// characters stay as singleton pieces; the concatenation of the output
// always reproduces the word.
Segmentation bpe_encode(const std::string& word, const MergeTable& table);

}  // namespace morphseg
