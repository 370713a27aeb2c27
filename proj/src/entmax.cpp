#include "morphseg/entmax.hpp"

#include <algorithm>
#include <cmath>

#include "morphseg/error.hpp"

namespace morphseg {

std::vector<double> entmax15(const std::vector<double>& scores) {
  if (scores.empty()) throw ConfigError("entmax15 needs at least one score");
  const std::size_t n = scores.size();

  // Work on s = z/2 shifted so max(s) = 0; the output is shift-invariant
  // and the shift keeps the cumulative sums well conditioned.
  std::vector<double> s(n);
  double mx = scores[0];
  for (double z : scores) mx = std::max(mx, z);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(scores[i])) {
      throw ConfigError("entmax15 scores must be finite");
    }
    s[i] = (scores[i] - mx) / 2.0;
  }

  std::vector<double> sorted = s;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  // For the top-k support, tau solves k*tau^2 - 2a*tau + (b - 1) = 0 with
  // a, b the sum and sum of squares of the top k entries.
  double a = 0.0, b = 0.0;
  double tau = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    a += sorted[k - 1];
    b += sorted[k - 1] * sorted[k - 1];
    const double kk = static_cast<double>(k);
    const double disc = std::max(0.0, a * a - kk * (b - 1.0));
    const double candidate = (a - std::sqrt(disc)) / kk;
    if (candidate <= sorted[k - 1]) {
      tau = candidate;
    } else {
      break;  // sorted entries only get smaller; no later k can qualify
    }
  }

  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = s[i] - tau;
    p[i] = d > 0.0 ? d * d : 0.0;
  }
  return p;
}

}  // namespace morphseg
