#include "probci/intervals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "probci/special_functions.hpp"

namespace probci {

namespace {

constexpr std::array<std::pair<IntervalMethod, std::string_view>, 10> kTags{{
    {IntervalMethod::kClt, "clt"},
    {IntervalMethod::kWilson, "wilson"},
    {IntervalMethod::kAgrestiCoull, "ac"},
    {IntervalMethod::kAgrestiCoullWilson, "acw"},
    {IntervalMethod::kLogit, "logit"},
    {IntervalMethod::kAnscombe, "anscombe"},
    {IntervalMethod::kArcsine, "arcsine"},
    {IntervalMethod::kBayesian, "bayes"},
    {IntervalMethod::kClopperPearson, "cp"},
    {IntervalMethod::kQint, "qint"},
}};

constexpr std::array<IntervalMethod, 9> kClosedForm{
    IntervalMethod::kClt,      IntervalMethod::kWilson,   IntervalMethod::kAgrestiCoull,
    IntervalMethod::kAgrestiCoullWilson, IntervalMethod::kLogit, IntervalMethod::kAnscombe,
    IntervalMethod::kArcsine,  IntervalMethod::kBayesian, IntervalMethod::kClopperPearson,
};

void require_trials(const BernoulliSummary& s) {
  if (s.n == 0) throw std::invalid_argument("interval needs at least one trial");
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

ConfidenceInterval make(IntervalMethod m, const BernoulliSummary& s, double confidence, double lo, double hi,
                        double half_width) {
  ConfidenceInterval ci;
  ci.lo = clamp01(lo);
  ci.hi = clamp01(hi);
  ci.confidence = confidence;
  ci.method = m;
  ci.n_used = s.n;
  ci.half_width = half_width;
  return ci;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

ConfidenceInterval logit_family(IntervalMethod m, const BernoulliSummary& s, double confidence, double lambda,
                                double var) {
  const double c = critical_value(confidence);
  const double d = c * std::sqrt(var);
  const double lo = logistic(lambda - d);
  const double hi = logistic(lambda + d);
  return make(m, s, confidence, lo, hi, 0.5 * (hi - lo));
}

ConfidenceInterval anscombe_impl(IntervalMethod tag, const BernoulliSummary& s, double confidence) {
  const double n = static_cast<double>(s.n);
  const double ns = static_cast<double>(s.successes);
  const double nf = n - ns;
  const double lambda = std::log((ns + 0.5) / (nf + 0.5));
  const double var = (n + 1.0) * (n + 2.0) / (n * (ns + 1.0) * (nf + 1.0));
  return logit_family(tag, s, confidence, lambda, var);
}

// Wilson-centre family: centre (n_s + C^2/2)/(n + C^2) and half-width h.
ConfidenceInterval centred(IntervalMethod m, const BernoulliSummary& s, double confidence, double centre, double h) {
  return make(m, s, confidence, centre - h, centre + h, h);
}

}  // namespace

std::string_view method_tag(IntervalMethod m) {
  for (const auto& [method, tag] : kTags) {
    if (method == m) return tag;
  }
  return "unknown";
}

std::optional<IntervalMethod> parse_method(std::string_view tag) {
  for (const auto& [method, name] : kTags) {
    if (name == tag) return method;
  }
  return std::nullopt;
}

std::span<const IntervalMethod> closed_form_methods() { return kClosedForm; }

std::string_view clt_floor_tag(CltFloor f) {
  switch (f) {
    case CltFloor::kNone: return "none";
    case CltFloor::kStdDev: return "sd";
    case CltFloor::kVariance: return "variance";
  }
  return "unknown";
}

std::optional<CltFloor> parse_clt_floor(std::string_view tag) {
  if (tag == "none") return CltFloor::kNone;
  if (tag == "sd") return CltFloor::kStdDev;
  if (tag == "variance") return CltFloor::kVariance;
  return std::nullopt;
}

BernoulliSummary::BernoulliSummary(std::uint64_t n_, std::uint64_t s_) : n(n_), successes(s_) {
  if (s_ > n_) throw std::invalid_argument("successes exceed trials");
}

double bernoulli_sample_sd(const BernoulliSummary& s) {
  if (s.n < 2) return 0.0;
  const double n = static_cast<double>(s.n);
  const double p = s.p_hat();
  return std::sqrt(n / (n - 1.0) * p * (1.0 - p));
}

double clt_effective_sd(const BernoulliSummary& s, CltFloor floor) {
  const double sd = bernoulli_sample_sd(s);
  if (s.successes != 0 && s.successes != s.n) return sd;
  const double n = static_cast<double>(s.n);
  switch (floor) {
    case CltFloor::kNone: return sd;
    case CltFloor::kStdDev: return std::max(sd, 1.0 / (n * n));
    case CltFloor::kVariance: return std::max(sd, 1.0 / n);
  }
  return sd;
}

ConfidenceInterval clt_interval(const BernoulliSummary& s, double confidence, CltFloor floor) {
  require_trials(s);
  const double c = critical_value(confidence);
  const double h = c * clt_effective_sd(s, floor) / std::sqrt(static_cast<double>(s.n));
  const double p = s.p_hat();
  return make(IntervalMethod::kClt, s, confidence, p - h, p + h, h);
}

ConfidenceInterval wilson_interval(const BernoulliSummary& s, double confidence) {
  require_trials(s);
  const double c = critical_value(confidence);
  const double c2 = c * c;
  const double n = static_cast<double>(s.n);
  const double p = s.p_hat();
  const double centre = (static_cast<double>(s.successes) + 0.5 * c2) / (n + c2);
  const double h = c * std::sqrt(n) / (n + c2) * std::sqrt(p * (1.0 - p) + c2 / (4.0 * n));
  return centred(IntervalMethod::kWilson, s, confidence, centre, h);
}

ConfidenceInterval agresti_coull_interval(const BernoulliSummary& s, double confidence) {
  require_trials(s);
  const double c = critical_value(confidence);
  const double nt = static_cast<double>(s.n) + c * c;
  const double pt = (static_cast<double>(s.successes) + 0.5 * c * c) / nt;
  const double h = c * std::sqrt(pt * (1.0 - pt) / nt);
  return centred(IntervalMethod::kAgrestiCoull, s, confidence, pt, h);
}

ConfidenceInterval agresti_coull_wilson_interval(const BernoulliSummary& s, double confidence) {
  // Wilson centre with the Agresti-Coull spread. With the standard Wilson
  // centre this is numerically the adjusted Agresti-Coull interval.
  require_trials(s);
  const double c = critical_value(confidence);
  const double c2 = c * c;
  const double n = static_cast<double>(s.n);
  const double centre = (static_cast<double>(s.successes) + 0.5 * c2) / (n + c2);
  const double h = c * std::sqrt(centre * (1.0 - centre) / (n + c2));
  return centred(IntervalMethod::kAgrestiCoullWilson, s, confidence, centre, h);
}

ConfidenceInterval logit_interval(const BernoulliSummary& s, double confidence) {
  require_trials(s);
  if (s.successes == 0 || s.successes == s.n) return anscombe_impl(IntervalMethod::kLogit, s, confidence);
  const double n = static_cast<double>(s.n);
  const double ns = static_cast<double>(s.successes);
  const double nf = n - ns;
  return logit_family(IntervalMethod::kLogit, s, confidence, std::log(ns / nf), n / (ns * nf));
}

ConfidenceInterval anscombe_interval(const BernoulliSummary& s, double confidence) {
  require_trials(s);
  return anscombe_impl(IntervalMethod::kAnscombe, s, confidence);
}

ConfidenceInterval arcsine_interval(const BernoulliSummary& s, double confidence) {
  require_trials(s);
  const double c = critical_value(confidence);
  const double n = static_cast<double>(s.n);
  const double pd = (static_cast<double>(s.successes) + 0.375) / (n + 0.75);
  const double t = std::asin(std::sqrt(pd));
  const double d = c / (2.0 * std::sqrt(n));
  const double lo = std::pow(std::sin(std::clamp(t - d, 0.0, std::numbers::pi / 2)), 2);
  const double hi = std::pow(std::sin(std::clamp(t + d, 0.0, std::numbers::pi / 2)), 2);
  return make(IntervalMethod::kArcsine, s, confidence, lo, hi, 0.5 * (hi - lo));
}

ConfidenceInterval bayesian_interval(const BernoulliSummary& s, double confidence, BetaParams prior) {
  if (!(prior.alpha > 0.0) || !(prior.beta > 0.0)) throw std::invalid_argument("prior parameters must be positive");
  if (s.successes > s.n) throw std::invalid_argument("successes exceed trials");
  const double tail = 0.5 * (1.0 - confidence);
  const double a = static_cast<double>(s.successes) + prior.alpha;
  const double b = static_cast<double>(s.failures()) + prior.beta;
  const double lo = beta_inv_cdf(tail, a, b);
  const double hi = beta_inv_ccdf(tail, a, b);
  return make(IntervalMethod::kBayesian, s, confidence, lo, hi, 0.5 * (hi - lo));
}

ConfidenceInterval clopper_pearson_interval(const BernoulliSummary& s, double confidence) {
  require_trials(s);
  const double tail = 0.5 * (1.0 - confidence);
  const double ns = static_cast<double>(s.successes);
  const double nf = static_cast<double>(s.failures());
  const double lo = s.successes == 0 ? 0.0 : beta_inv_cdf(tail, ns, nf + 1.0);
  const double hi = s.successes == s.n ? 1.0 : beta_inv_ccdf(tail, ns + 1.0, nf);
  return make(IntervalMethod::kClopperPearson, s, confidence, lo, hi, 0.5 * (hi - lo));
}

ConfidenceInterval compute_interval(IntervalMethod m, const BernoulliSummary& s, double confidence,
                                    const IntervalOptions& opts) {
  switch (m) {
    case IntervalMethod::kClt: return clt_interval(s, confidence, opts.clt_floor);
    case IntervalMethod::kWilson: return wilson_interval(s, confidence);
    case IntervalMethod::kAgrestiCoull: return agresti_coull_interval(s, confidence);
    case IntervalMethod::kAgrestiCoullWilson: return agresti_coull_wilson_interval(s, confidence);
    case IntervalMethod::kLogit: return logit_interval(s, confidence);
    case IntervalMethod::kAnscombe: return anscombe_interval(s, confidence);
    case IntervalMethod::kArcsine: return arcsine_interval(s, confidence);
    case IntervalMethod::kBayesian: return bayesian_interval(s, confidence, opts.prior);
    case IntervalMethod::kClopperPearson: return clopper_pearson_interval(s, confidence);
    case IntervalMethod::kQint: break;
  }
  throw std::invalid_argument("Qint intervals are computed from a point set, not a Bernoulli summary");
}

}  // namespace probci
