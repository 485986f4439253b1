#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace aising::numerics {

/// log(sum_i exp(v_i)) with a single max shift. Returns -inf for an empty
/// input or when every entry is -inf.
inline double log_sum_exp(std::span<const double> values) {
  double shift = -std::numeric_limits<double>::infinity();
  for (double v : values) shift = std::max(shift, v);
  if (!std::isfinite(shift)) return shift;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - shift);
  return shift + std::log(sum);
}

/// log C(n, k) through log-gamma. Written as lgamma(n+1) - (lgamma(k+1) +
/// lgamma(n-k+1)) so that k and n-k give bit-identical results.
inline double log_binomial(long n, long k) {
  const double inner = std::lgamma(static_cast<double>(k) + 1.0) +
                       std::lgamma(static_cast<double>(n - k) + 1.0);
  return std::lgamma(static_cast<double>(n) + 1.0) - inner;
}

}  // namespace aising::numerics
