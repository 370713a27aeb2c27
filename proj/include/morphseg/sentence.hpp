#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "morphseg/core.hpp"
#include "morphseg/segmenter.hpp"

namespace morphseg {

// Whitespace tokenization; punctuation stays attached as in the data.
std::vector<std::string> tokenize(const std::string& sentence);

// Per-word analysis counts plus immediate-neighbour co-occurrence counts,
// for context-dependent disambiguation of homonyms. Analyses are stored
// in their formatted ("a @@b") form.
struct ContextModel {
  std::string language;
  // word -> formatted analysis -> count
  std::map<std::string, std::map<std::string, std::int64_t>> analyses;
  // [0]=left, [1]=right: word -> neighbour word -> analysis -> count
  std::array<std::map<std::string,
                      std::map<std::string, std::map<std::string, std::int64_t>>>,
             2>
      neighbors;
};

ContextModel train_context(const Dataset& train);

// Per token: a unique lexicon analysis is used as is; ambiguous tokens are
// scored by the add-1-smoothed product of neighbour counts (ties: higher
// lexicon count, then fewer morphemes, then formatted order); unseen
// tokens delegate to the fallback segmenter.
SentenceEntry segment_sentence(const std::string& sentence,
                               const ContextModel* context,
                               const Segmenter* fallback);

}  // namespace morphseg
