#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morphseg/core.hpp"

namespace morphseg {

// Monotone alignment of a word's characters to its canonical morphemes:
// one contiguous (possibly empty) span per morpheme, spans covering the
// word in order.
struct AlignedEntry {
  // (start, end) code-point offsets, one per morpheme.
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::vector<std::int64_t> costs;  // edit distance span vs morpheme
  std::int64_t total_cost = 0;
};

// Minimizes total edit cost; among minima prefers evenly spread edits
// (smallest sum of squared span costs), then the longest early spans
// (latest boundary vector).
AlignedEntry align_canonical(const std::string& word, const Segmentation& gold);

// Edit distance over code points (unit costs).
std::int64_t levenshtein_u32(std::u32string_view a, std::u32string_view b);

}  // namespace morphseg
