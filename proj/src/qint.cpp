#include "probci/qint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "probci/special_functions.hpp"

namespace probci {

std::vector<unsigned> qint_bits(unsigned s, std::size_t dimension) {
  std::vector<unsigned> bits(dimension, 0);
  for (unsigned i = 0; i < s; ++i) ++bits[i % dimension];
  return bits;
}

std::uint32_t qint_cell(std::span<const double> x, std::span<const unsigned> bits) {
  std::uint32_t cell = 0;
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] == 0) continue;
    const auto scale = static_cast<double>(std::uint64_t{1} << bits[j]);
    const auto digit = static_cast<std::uint32_t>(x[j] * scale);
    cell = (cell << bits[j]) | digit;
  }
  return cell;
}

QintPartition qint_partition(const SobolGenerator& gen, std::size_t k, unsigned s) {
  if (k == 0) throw std::invalid_argument("qint needs k >= 1");
  if (s >= 31) throw std::invalid_argument("qint s too large");
  const std::uint64_t n = static_cast<std::uint64_t>(k) << s;
  if (n >= SobolGenerator::kMaxPoints) throw std::invalid_argument("k*2^s exceeds generator capacity");

  QintPartition part;
  part.k = k;
  part.s = s;
  part.dimension = gen.dimension();
  part.bits = qint_bits(s, part.dimension);
  part.points.resize(n * part.dimension);
  part.cell.resize(n);
  std::vector<std::size_t> counts(part.strata(), 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::span<double> x(part.points.data() + i * part.dimension, part.dimension);
    gen.point_at(i, x);
    part.cell[i] = qint_cell(x, part.bits);
    ++counts[part.cell[i]];
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] != k) {
      throw std::runtime_error("qint cell " + std::to_string(c) + " holds " + std::to_string(counts[c]) +
                               " points, expected " + std::to_string(k));
    }
  }
  return part;
}

std::vector<StratumSummary> qint_strata(std::span<const double> values, const QintPartition& part) {
  if (values.size() != part.n()) throw std::invalid_argument("qint value count does not match partition");
  std::vector<StratumSummary> strata(part.strata());
  for (std::size_t c = 0; c < strata.size(); ++c) strata[c].index = static_cast<std::uint32_t>(c);
  for (std::size_t i = 0; i < values.size(); ++i) {
    strata[part.cell[i]].mean += values[i];
    ++strata[part.cell[i]].count;
  }
  for (auto& st : strata) st.mean /= static_cast<double>(st.count);
  return strata;
}

std::vector<StratumSummary> qint_strata(const Integrand& f, const QintPartition& part) {
  if (f.dimension != part.dimension) throw std::invalid_argument("partition/integrand dimension mismatch");
  std::vector<double> values(part.n());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(part.point(i));
  return qint_strata(values, part);
}

QintVariance qint_variance(std::span<const StratumSummary> strata, std::size_t k, double mc_variance,
                           QintNormalization norm) {
  if (strata.empty()) throw std::invalid_argument("qint_variance needs at least one stratum");
  if (!(mc_variance >= 0.0)) throw std::invalid_argument("mc_variance must be non-negative");
  const double cells = static_cast<double>(strata.size());
  // sum_{i<j} (a_i - a_j)^2 = N sum_i (a_i - mean a)^2 with a_i = mean_i / N.
  double mbar = 0.0;
  for (const auto& st : strata) mbar += st.mean;
  mbar /= cells;
  double ss = 0.0;
  for (const auto& st : strata) ss += (st.mean - mbar) * (st.mean - mbar);
  const double pairwise = ss / cells;
  const double divisor = norm == QintNormalization::kPointCount ? cells * static_cast<double>(k) : cells;

  QintVariance out;
  out.mc_variance = mc_variance;
  out.correction = pairwise / divisor;
  out.variance = mc_variance - out.correction;
  if (out.variance < 0.0) {
    out.variance = 0.0;
    out.clamped = true;
  }
  return out;
}

QintVariance qint_variance(const Integrand& f, const QintPartition& part, double mc_variance,
                           QintNormalization norm) {
  return qint_variance(qint_strata(f, part), part.k, mc_variance, norm);
}

ConfidenceInterval qint_interval(std::span<const double> values, const QintPartition& part, double confidence,
                                 const QintOptions& opts) {
  const auto strata = qint_strata(values, part);
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double mc_var = values.size() > 1 ? ss / (n - 1.0) / n : 0.0;
  const QintVariance qv = qint_variance(strata, part.k, mc_var, opts.normalization);

  double sd = std::sqrt(qv.variance);
  if (ss == 0.0) {
    // Constant sample: borrow the CLT floor (sd/sqrt(n) with sd = 1/n or 1/n^2).
    if (opts.floor == CltFloor::kVariance) sd = 1.0 / n / std::sqrt(n);
    if (opts.floor == CltFloor::kStdDev) sd = 1.0 / (n * n) / std::sqrt(n);
  }
  const double h = critical_value(confidence) * sd;
  ConfidenceInterval ci;
  ci.lo = std::clamp(mean - h, 0.0, 1.0);
  ci.hi = std::clamp(mean + h, 0.0, 1.0);
  ci.confidence = confidence;
  ci.method = IntervalMethod::kQint;
  ci.n_used = values.size();
  ci.half_width = h;
  return ci;
}

ConfidenceInterval qint_interval(const Integrand& f, const SobolGenerator& gen, std::size_t k, unsigned s,
                                 double confidence, const QintOptions& opts) {
  if (f.dimension != gen.dimension()) throw std::invalid_argument("partition/integrand dimension mismatch");
  const QintPartition part = qint_partition(gen, k, s);
  std::vector<double> values(part.n());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(part.point(i));
  return qint_interval(values, part, confidence, opts);
}

}  // namespace probci
