// Binomial-proportion confidence intervals.
//
// Every method returns an interval clamped into [0,1] together with its
// native half-width: the half-width the method itself produces before any
// clamping. Sequential stopping compares the native half-width against the
// target accuracy, so a CLT interval [0, h] at p-hat = 0 counts as h wide,
// not h/2.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace probci {

enum class IntervalMethod {
  kClt,
  kWilson,
  kAgrestiCoull,
  kAgrestiCoullWilson,
  kLogit,
  kAnscombe,
  kArcsine,
  kBayesian,
  kClopperPearson,
  kQint,
};

/// Short tags used on the command line and in CSV output.
std::string_view method_tag(IntervalMethod m);
std::optional<IntervalMethod> parse_method(std::string_view tag);
/// The nine closed-form methods (everything except Qint, which needs points).
std::span<const IntervalMethod> closed_form_methods();

struct BernoulliSummary {
  std::uint64_t n = 0;
  std::uint64_t successes = 0;

  BernoulliSummary() = default;
  BernoulliSummary(std::uint64_t n_, std::uint64_t s_);

  double p_hat() const { return static_cast<double>(successes) / static_cast<double>(n); }
  std::uint64_t failures() const { return n - successes; }
  void add(bool success) {
    ++n;
    successes += success ? 1 : 0;
  }
};

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 1.0;
  double confidence = 0.0;
  IntervalMethod method = IntervalMethod::kClt;
  std::uint64_t n_used = 0;
  double half_width = 0.5;

  double center() const { return 0.5 * (lo + hi); }
  bool contains(double p) const { return lo <= p && p <= hi; }
};

struct BetaParams {
  double alpha = 0.5;
  double beta = 0.5;

  static BetaParams jeffreys() { return {0.5, 0.5}; }
  static BetaParams uniform() { return {1.0, 1.0}; }
};

/// How the CLT interval treats a zero sample standard deviation
/// (p-hat exactly 0 or 1).
enum class CltFloor {
  kNone,      // textbook CLT: zero width
  kStdDev,    // sd replaced by 1/n^2
  kVariance,  // variance replaced by 1/n^2, i.e. sd = 1/n (default)
};

std::string_view clt_floor_tag(CltFloor f);
std::optional<CltFloor> parse_clt_floor(std::string_view tag);

struct IntervalOptions {
  BetaParams prior = BetaParams::jeffreys();
  CltFloor clt_floor = CltFloor::kVariance;
};

/// Sample standard deviation of a 0/1 sample, sqrt(n/(n-1) p q); 0 for n = 1.
double bernoulli_sample_sd(const BernoulliSummary& s);
/// CLT standard deviation after applying the floor rule.
double clt_effective_sd(const BernoulliSummary& s, CltFloor floor);

ConfidenceInterval clt_interval(const BernoulliSummary& s, double confidence, CltFloor floor = CltFloor::kVariance);
ConfidenceInterval wilson_interval(const BernoulliSummary& s, double confidence);
ConfidenceInterval agresti_coull_interval(const BernoulliSummary& s, double confidence);
ConfidenceInterval agresti_coull_wilson_interval(const BernoulliSummary& s, double confidence);
/// Falls back to the Anscombe estimate when successes is 0 or n.
ConfidenceInterval logit_interval(const BernoulliSummary& s, double confidence);
ConfidenceInterval anscombe_interval(const BernoulliSummary& s, double confidence);
ConfidenceInterval arcsine_interval(const BernoulliSummary& s, double confidence);
/// Equal-tailed posterior interval; n = 0 is allowed.
ConfidenceInterval bayesian_interval(const BernoulliSummary& s, double confidence,
                                     BetaParams prior = BetaParams::jeffreys());
ConfidenceInterval clopper_pearson_interval(const BernoulliSummary& s, double confidence);

/// Dispatches to one of the closed-form methods. Throws std::invalid_argument
/// for kQint, which is computed from the point set (see qint.hpp).
ConfidenceInterval compute_interval(IntervalMethod m, const BernoulliSummary& s, double confidence,
                                    const IntervalOptions& opts = {});

}  // namespace probci
