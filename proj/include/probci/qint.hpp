// Qint: the first k*2^s Sobol points (origin included) grouped into 2^s dyadic cells of
// k points each, with the stratified variance
//   Var(Qint) = Var(MC) - (1/n) sum_{i<j} (a_i - a_j)^2
// where a_i is the estimated integral of f over cell i.
#pragma once

#include <cstdint>
#include <vector>

#include "probci/estimators.hpp"
#include "probci/intervals.hpp"
#include "probci/sequences.hpp"

namespace probci {

struct QintPartition {
  std::size_t k = 2;
  unsigned s = 0;
  std::size_t dimension = 1;
  /// Point coordinates, row-major, in Sobol index order. The set starts at
  /// the origin: numbering the points 1..k*2^s from the first one keeps every
  /// cell balanced, which a start at the second point does not in dim >= 2.
  std::vector<double> points;
  /// Cell id of every point.
  std::vector<std::uint32_t> cell;
  /// Bits of resolution per coordinate; cells split coordinates round-robin.
  std::vector<unsigned> bits;

  std::size_t n() const { return k << s; }
  std::size_t strata() const { return std::size_t{1} << s; }
  std::span<const double> point(std::size_t i) const { return {points.data() + i * dimension, dimension}; }
};

struct StratumSummary {
  std::uint32_t index = 0;
  double mean = 0.0;
  std::size_t count = 0;
};

/// Which count divides the pairwise spread of the cell integrals.
enum class QintNormalization {
  kPointCount,    // 1/n, n = k*2^s: removes exactly the between-cell share of s^2/n
  kStratumCount,  // 1/N, N = 2^s (coincides with kPointCount when k = 1)
};

struct QintVariance {
  double variance = 0.0;
  double mc_variance = 0.0;
  double correction = 0.0;
  bool clamped = false;
};

/// Round-robin bit allocation: coordinate j gets ceil((s - j) / d) bits.
std::vector<unsigned> qint_bits(unsigned s, std::size_t dimension);
std::uint32_t qint_cell(std::span<const double> x, std::span<const unsigned> bits);

/// Throws std::runtime_error if a cell does not receive exactly k points
/// (a direction-number or indexing defect) and std::invalid_argument for bad
/// k, s. The generator's digital shift is honoured; its position is not used.
QintPartition qint_partition(const SobolGenerator& gen, std::size_t k, unsigned s);

std::vector<StratumSummary> qint_strata(std::span<const double> values, const QintPartition& part);
std::vector<StratumSummary> qint_strata(const Integrand& f, const QintPartition& part);

/// mc_variance is the variance of the plain average, s^2/n.
QintVariance qint_variance(std::span<const StratumSummary> strata, std::size_t k, double mc_variance,
                           QintNormalization norm = QintNormalization::kPointCount);
QintVariance qint_variance(const Integrand& f, const QintPartition& part, double mc_variance,
                           QintNormalization norm = QintNormalization::kPointCount);

struct QintOptions {
  CltFloor floor = CltFloor::kVariance;
  QintNormalization normalization = QintNormalization::kPointCount;
};

/// Interval from the function values at the partition points (in order).
/// Centre is the plain average; half-width C*sqrt(variance). When every value
/// is 0 or every value is 1 the CLT floor rule supplies the spread.
ConfidenceInterval qint_interval(std::span<const double> values, const QintPartition& part, double confidence,
                                 const QintOptions& opts = {});
ConfidenceInterval qint_interval(const Integrand& f, const SobolGenerator& gen, std::size_t k, unsigned s,
                                 double confidence, const QintOptions& opts = {});

}  // namespace probci
