// MC, QMC and RQMC estimates of E[f(U)] for U uniform on [0,1)^d.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "probci/sequences.hpp"

namespace probci {

struct Integrand {
  std::function<double(std::span<const double>)> f;
  std::size_t dimension = 1;
  /// Known bounds on f, when available (e.g. [0,1] for indicators).
  std::optional<std::pair<double, double>> range;

  double operator()(std::span<const double> x) const { return f(x); }
};

enum class EstimatorKind { kMc, kQmc, kRqmc };
std::string_view estimator_tag(EstimatorKind k);

struct EstimateReport {
  double estimate = 0.0;
  /// Variance of the estimate. Empty for plain QMC, which has no
  /// practical error estimate.
  std::optional<double> variance;
  std::uint64_t n = 0;
  /// Per-replicate estimates, in replicate order (RQMC only).
  std::vector<double> replicates;
  EstimatorKind kind = EstimatorKind::kMc;
};

/// Plain MC with the unbiased sample variance; variance is s^2/n.
/// Requires n >= 2.
EstimateReport mc_estimate(const Integrand& f, PseudoRandomGenerator& gen, std::uint64_t n);

/// Average over the next n points of gen (advances the generator).
EstimateReport qmc_estimate(const Integrand& f, SobolGenerator& gen, std::uint64_t n);

inline constexpr std::size_t kDefaultReplicates = 10;

/// r Cranley-Patterson shifted copies of the n Sobol points starting at
/// gen.index(). Shifts are drawn in order from prng, so the result does not
/// depend on the thread count. variance is the replicate variance / r.
EstimateReport rqmc_estimate(const Integrand& f, const SobolGenerator& gen, PseudoRandomGenerator& prng,
                             std::uint64_t n, std::size_t r = kDefaultReplicates);
/// Single-threaded reference for rqmc_estimate.
EstimateReport rqmc_estimate_serial(const Integrand& f, const SobolGenerator& gen, PseudoRandomGenerator& prng,
                                    std::uint64_t n, std::size_t r = kDefaultReplicates);

struct ErrorPoint {
  std::uint64_t n = 0;
  double mean_abs_error = 0.0;
  double median_abs_error = 0.0;
};

/// |estimate - true_value| at every grid size. MC and RQMC average over the
/// seeds (one nested stream per seed, so larger n extends smaller n); QMC is
/// deterministic and ignores them. The grid must be non-empty and increasing.
std::vector<ErrorPoint> absolute_error_trace(const Integrand& f, double true_value, EstimatorKind kind,
                                             std::span<const std::uint64_t> n_grid,
                                             std::span<const std::uint64_t> seeds);

/// Roughly log-spaced integer grid from lo to hi inclusive.
std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi, std::size_t points_per_decade);

}  // namespace probci
