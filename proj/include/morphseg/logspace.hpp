#pragma once

#include <cmath>
#include <limits>

namespace morphseg {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(x) + exp(y)) without leaving log space.
inline double log_add(double x, double y) {
  if (x == kLogZero) return y;
  if (y == kLogZero) return x;
  const double hi = x > y ? x : y;
  const double lo = x > y ? y : x;
  if (hi - lo > 50.0) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace morphseg
