#include "probci_reference/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>

namespace probci::reference {

namespace {

long double clamp01(long double x) { return std::clamp(x, 0.0L, 1.0L); }

Interval clamp(Interval iv) { return {clamp01(iv.lo), clamp01(iv.hi)}; }

Interval logit_back(long double lambda, long double var, long double c) {
  const long double d = c * std::sqrt(var);
  return {1.0L / (1.0L + std::exp(-(lambda - d))), 1.0L / (1.0L + std::exp(-(lambda + d)))};
}

Interval anscombe(long double n, long double ns, long double c) {
  const long double nf = n - ns;
  return logit_back(std::log((ns + 0.5L) / (nf + 0.5L)), (n + 1) * (n + 2) / (n * (ns + 1) * (nf + 1)), c);
}

Interval raw_interval(Method m, std::uint64_t n_, std::uint64_t s_, long double confidence, bool var_floor,
                      long double alpha, long double beta, bool textbook_clt) {
  const long double n = static_cast<long double>(n_);
  const long double ns = static_cast<long double>(s_);
  const long double nf = n - ns;
  const long double tail = (1.0L - confidence) / 2.0L;
  const long double c = -normal_quantile(tail);
  const long double c2 = c * c;
  const long double p = ns / n;
  switch (m) {
    case Method::kClt: {
      long double sd = n > 1 ? std::sqrt(n / (n - 1) * p * (1 - p)) : 0.0L;
      if (!textbook_clt && (s_ == 0 || s_ == n_)) sd = std::max(sd, var_floor ? 1.0L / n : 1.0L / (n * n));
      const long double h = c * sd / std::sqrt(n);
      return {p - h, p + h};
    }
    case Method::kWilson: {
      const long double mid = (ns + c2 / 2) / (n + c2);
      const long double h = c * std::sqrt(n) / (n + c2) * std::sqrt(p * (1 - p) + c2 / (4 * n));
      return {mid - h, mid + h};
    }
    case Method::kAgrestiCoull:
    case Method::kAgrestiCoullWilson: {
      const long double nt = n + c2;
      const long double pt = (ns + c2 / 2) / nt;
      const long double h = c * std::sqrt(pt * (1 - pt) / nt);
      return {pt - h, pt + h};
    }
    case Method::kLogit:
      if (s_ == 0 || s_ == n_) return anscombe(n, ns, c);
      return logit_back(std::log(ns / nf), n / (ns * nf), c);
    case Method::kAnscombe: return anscombe(n, ns, c);
    case Method::kArcsine: {
      const long double pd = (ns + 0.375L) / (n + 0.75L);
      const long double t = std::asin(std::sqrt(pd));
      const long double d = c / (2 * std::sqrt(n));
      const long double half_pi = std::acos(-1.0L) / 2;
      const long double lo = std::sin(std::clamp(t - d, 0.0L, half_pi));
      const long double hi = std::sin(std::clamp(t + d, 0.0L, half_pi));
      return {lo * lo, hi * hi};
    }
    case Method::kBayesian:
      return {beta_quantile(tail, ns + alpha, nf + beta), beta_upper_quantile(tail, ns + alpha, nf + beta)};
    case Method::kClopperPearson:
      return {s_ == 0 ? 0.0L : beta_quantile(tail, ns, nf + 1), s_ == n_ ? 1.0L : beta_upper_quantile(tail, ns + 1, nf)};
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace

long double normal_quantile(long double p) {
  return boost::math::quantile(boost::math::normal_distribution<long double>(), p);
}

long double beta_quantile(long double q, long double a, long double b) {
  return boost::math::quantile(boost::math::beta_distribution<long double>(a, b), q);
}

long double beta_upper_quantile(long double q, long double a, long double b) {
  return boost::math::quantile(boost::math::complement(boost::math::beta_distribution<long double>(a, b), q));
}

Interval interval(Method m, std::uint64_t n, std::uint64_t successes, long double confidence, bool clt_variance_floor,
                  long double alpha, long double beta) {
  if (successes > n) throw std::invalid_argument("successes exceed trials");
  if (n == 0 && m != Method::kBayesian) throw std::invalid_argument("n must be positive");
  return clamp(raw_interval(m, n, successes, confidence, clt_variance_floor, alpha, beta, false));
}

long double exact_coverage(Method m, std::uint64_t n, long double p, long double confidence) {
  const boost::math::binomial_distribution<long double> dist(static_cast<long double>(n), p);
  long double cover = 0.0L;
  for (std::uint64_t k = 0; k <= n; ++k) {
    const Interval iv = clamp(raw_interval(m, n, k, confidence, true, 0.5L, 0.5L, true));
    if (iv.lo <= p && p <= iv.hi) cover += boost::math::pdf(dist, static_cast<long double>(k));
  }
  return cover;
}

}  // namespace probci::reference
