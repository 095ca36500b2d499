// Independent closed-form oracle for the interval methods. Evaluates every
// formula in long double with Boost.Math quantiles, sharing no code with the
// library under test.
#pragma once

#include <cstdint>
#include <utility>

namespace probci::reference {

enum class Method { kClt, kWilson, kAgrestiCoull, kAgrestiCoullWilson, kLogit, kAnscombe, kArcsine, kBayesian,
                    kClopperPearson };

struct Interval {
  long double lo;
  long double hi;
};

long double normal_quantile(long double p);
long double beta_quantile(long double q, long double a, long double b);
long double beta_upper_quantile(long double q, long double a, long double b);

/// clt_variance_floor: sd floored at 1/n (true) or 1/n^2 (false) when
/// successes is 0 or n. Bayesian uses the prior (alpha, beta).
Interval interval(Method m, std::uint64_t n, std::uint64_t successes, long double confidence,
                  bool clt_variance_floor = true, long double alpha = 0.5L, long double beta = 0.5L);

/// Exact coverage probability of a method at true p by binomial enumeration.
/// The CLT here is the textbook interval with no floor.
long double exact_coverage(Method m, std::uint64_t n, long double p, long double confidence);

}  // namespace probci::reference
