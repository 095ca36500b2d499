// Sequential estimation: draw samples until the chosen interval is narrow
// enough, the 10-run averaging protocol, and the validated (X_sat, X_usat)
// bounding estimator.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "probci/estimators.hpp"
#include "probci/intervals.hpp"
#include "probci/models.hpp"
#include "probci/qint.hpp"

namespace probci {

struct StoppingRule {
  double confidence = 0.99;
  /// Target accuracy eps; the full interval width is 2 eps.
  double half_width = 5e-3;
  std::uint64_t max_samples = 10'000'000;
  /// No stop is accepted before this many samples.
  std::uint64_t min_samples = 1;
  /// The interval is recomputed after every step up to this many samples...
  std::uint64_t dense_until = 1000;
  /// ...and after every `batch` further samples beyond it.
  std::uint64_t batch = 16;

  void validate() const;
};

enum class SamplerKind { kMc, kRqmc, kQint };
std::string_view sampler_tag(SamplerKind s);
std::optional<SamplerKind> parse_sampler(std::string_view tag);
/// Bayesian and Clopper-Pearson run on MC, Qint on its own sampler, the
/// CLT family on RQMC.
SamplerKind default_sampler(IntervalMethod m);

/// How RQMC replicates feed the interval.
enum class RqmcMode {
  kPooled,          // all r*m samples form one Bernoulli summary
  kReplicateMeans,  // CLT over the r replicate means (CLT method only)
};

struct SequentialTask {
  /// Must return exactly 0 or 1.
  Integrand f;
  IntervalMethod method = IntervalMethod::kClt;
  StoppingRule rule;
  SamplerKind sampler = SamplerKind::kRqmc;
  IntervalOptions interval;
  QintOptions qint;
  std::size_t replicates = kDefaultReplicates;
  std::size_t qint_k = 2;
  RqmcMode rqmc_mode = RqmcMode::kPooled;
  bool record_trajectory = false;
};

struct Checkpoint {
  std::uint64_t n = 0;
  std::uint64_t successes = 0;
  double lo = 0.0;
  double hi = 1.0;
  double half_width = 0.5;
};

struct SequentialReport {
  ConfidenceInterval interval;
  std::uint64_t n_used = 0;
  std::uint64_t successes = 0;
  bool converged = false;
  IntervalMethod method = IntervalMethod::kClt;
  SamplerKind sampler = SamplerKind::kMc;
  std::uint64_t seed = 0;
  std::vector<Checkpoint> trajectory;
  /// Sample counts visited by the Qint sampler (k*2^s, s = 0, 1, ...).
  std::vector<std::uint64_t> qint_schedule;

  double estimate() const { return n_used ? static_cast<double>(successes) / static_cast<double>(n_used) : 0.0; }
};

/// Deterministic in (task, seed). Reaching max_samples is reported through
/// converged = false with the last interval, not thrown.
SequentialReport sequential_estimate(const SequentialTask& task, std::uint64_t seed);

struct AveragedReport {
  std::vector<SequentialReport> runs;
  double mean_lo = 0.0;
  double mean_hi = 0.0;
  double mean_n_used = 0.0;
  bool all_converged = true;

  double mean_center() const { return 0.5 * (mean_lo + mean_hi); }
  bool contains(double p) const { return mean_lo <= p && p <= mean_hi; }
};

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run);

/// Runs are independent and execute in parallel; aggregation is in run order.
AveragedReport averaged_runs(const SequentialTask& task, std::uint64_t master_seed, std::size_t runs = 10);
AveragedReport averaged_runs_serial(const SequentialTask& task, std::uint64_t master_seed, std::size_t runs = 10);

/// Produces 1 or r points per step in [0,1)^d: one pseudorandom point (MC)
/// or the same Sobol point under r fixed random shifts (RQMC).
class SampleStream {
 public:
  SampleStream(SamplerKind kind, std::size_t dimension, std::size_t replicates, std::uint64_t seed);

  std::size_t width() const { return width_; }
  std::size_t dimension() const { return dimension_; }
  /// Fills width()*dimension() coordinates, replicate-major.
  void step(std::vector<double>& out);

 private:
  SamplerKind kind_;
  std::size_t dimension_;
  std::size_t width_;
  PseudoRandomGenerator prng_;
  SobolGenerator sobol_;
  std::vector<std::vector<double>> shifts_;
  std::vector<double> base_;
};

using ThreeValuedOracle = std::function<Verdict(std::span<const double>)>;

struct SandwichPoint {
  std::uint64_t n = 0;
  double lower = 0.0;
  double upper = 1.0;
};

struct ValidatedReport {
  SequentialReport lower;  // X_sat
  SequentialReport upper;  // X_usat
  double enclosure_lo = 0.0;
  double enclosure_hi = 1.0;
  /// lower.p-hat <= upper.p-hat held at every checkpoint.
  bool ordered = true;
  std::vector<SandwichPoint> trajectory;

  double gap() const { return upper.estimate() - lower.estimate(); }
};

/// Both estimates consume one shared point stream in lockstep and stop at the
/// first checkpoint where both meet the rule. MC and RQMC samplers only.
ValidatedReport validated_estimate(const ThreeValuedOracle& oracle, std::size_t dimension, IntervalMethod method,
                                   const StoppingRule& rule, SamplerKind sampler, std::uint64_t seed,
                                   const IntervalOptions& opts = {}, bool record_trajectory = false);

}  // namespace probci
