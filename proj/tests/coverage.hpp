// Exact coverage of a library interval method by binomial enumeration.
#pragma once

#include <cmath>
#include <cstdint>

#include "probci/intervals.hpp"

namespace probci::testing {

inline double binomial_pmf(std::uint64_t n, std::uint64_t k, double p) {
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::exp(std::lgamma(nd + 1) - std::lgamma(kd + 1) - std::lgamma(nd - kd + 1) + kd * std::log(p) +
                  (nd - kd) * std::log1p(-p));
}

inline double exact_coverage(IntervalMethod m, std::uint64_t n, double p, double confidence,
                             const IntervalOptions& opts = {}) {
  double cover = 0.0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    const auto ci = compute_interval(m, BernoulliSummary(n, k), confidence, opts);
    if (ci.contains(p)) cover += binomial_pmf(n, k, p);
  }
  return cover;
}

}  // namespace probci::testing
