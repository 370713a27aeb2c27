#pragma once

#include <vector>

namespace morphseg {

// Exact 1.5-entmax: p_i = max(0, scores_i/2 - tau)^2 with tau chosen by
// the sort-based threshold algorithm so the outputs sum to 1. Outputs can
// be exactly zero.
std::vector<double> entmax15(const std::vector<double>& scores);

}  // namespace morphseg
