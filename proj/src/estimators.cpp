#include "probci/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace probci {

namespace {

void check_integrand(const Integrand& f) {
  if (!f.f) throw std::invalid_argument("integrand has no callable");
  if (f.dimension == 0) throw std::invalid_argument("integrand dimension must be >= 1");
}

std::vector<std::vector<double>> draw_shifts(PseudoRandomGenerator& prng, std::size_t r, std::size_t dim) {
  std::vector<std::vector<double>> shifts(r, std::vector<double>(dim));
  for (auto& s : shifts) prng.fill(s);
  return shifts;
}

double replicate_mean(const Integrand& f, const SobolGenerator& gen, std::span<const double> shift,
                      std::uint64_t n) {
  std::vector<double> x(gen.dimension());
  const std::uint64_t start = gen.index();
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    gen.point_at(start + i, x);
    shift_in_place(x, shift);
    sum += f(x);
  }
  return sum / static_cast<double>(n);
}

EstimateReport rqmc_finish(std::vector<double> reps, std::uint64_t n) {
  const double r = static_cast<double>(reps.size());
  double mean = 0.0;
  for (double v : reps) mean += v;
  mean /= r;
  double ss = 0.0;
  for (double v : reps) ss += (v - mean) * (v - mean);
  EstimateReport out;
  out.estimate = mean;
  out.variance = ss / (r * (r - 1.0));
  out.n = n;
  out.replicates = std::move(reps);
  out.kind = EstimatorKind::kRqmc;
  return out;
}

void check_rqmc(const Integrand& f, const SobolGenerator& gen, std::uint64_t n, std::size_t r) {
  check_integrand(f);
  if (gen.dimension() != f.dimension) throw std::invalid_argument("generator/integrand dimension mismatch");
  if (n == 0) throw std::invalid_argument("rqmc_estimate needs n >= 1");
  if (r < 2) throw std::invalid_argument("rqmc_estimate needs at least 2 replicates");
  if (gen.index() + n > SobolGenerator::kMaxPoints) throw std::overflow_error("Sobol index exceeds 2^32 points");
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::string_view estimator_tag(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::kMc: return "mc";
    case EstimatorKind::kQmc: return "qmc";
    case EstimatorKind::kRqmc: return "rqmc";
  }
  return "unknown";
}

EstimateReport mc_estimate(const Integrand& f, PseudoRandomGenerator& gen, std::uint64_t n) {
  check_integrand(f);
  if (n < 2) throw std::invalid_argument("mc_estimate needs n >= 2");
  std::vector<double> x(f.dimension);
  // Welford running mean / sum of squares.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    gen.fill(x);
    const double v = f(x);
    const double d = v - mean;
    mean += d / static_cast<double>(i);
    m2 += d * (v - mean);
  }
  EstimateReport out;
  out.estimate = mean;
  out.variance = std::max(0.0, m2 / static_cast<double>(n - 1)) / static_cast<double>(n);
  out.n = n;
  out.kind = EstimatorKind::kMc;
  return out;
}

EstimateReport qmc_estimate(const Integrand& f, SobolGenerator& gen, std::uint64_t n) {
  check_integrand(f);
  if (gen.dimension() != f.dimension) throw std::invalid_argument("generator/integrand dimension mismatch");
  if (n == 0) throw std::invalid_argument("qmc_estimate needs n >= 1");
  std::vector<double> x(f.dimension);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    gen.next(x);
    sum += f(x);
  }
  EstimateReport out;
  out.estimate = sum / static_cast<double>(n);
  out.n = n;
  out.kind = EstimatorKind::kQmc;
  return out;
}

EstimateReport rqmc_estimate_serial(const Integrand& f, const SobolGenerator& gen, PseudoRandomGenerator& prng,
                                    std::uint64_t n, std::size_t r) {
  check_rqmc(f, gen, n, r);
  const auto shifts = draw_shifts(prng, r, f.dimension);
  std::vector<double> reps(r);
  for (std::size_t j = 0; j < r; ++j) reps[j] = replicate_mean(f, gen, shifts[j], n);
  return rqmc_finish(std::move(reps), n);
}

EstimateReport rqmc_estimate(const Integrand& f, const SobolGenerator& gen, PseudoRandomGenerator& prng,
                             std::uint64_t n, std::size_t r) {
  check_rqmc(f, gen, n, r);
  const auto shifts = draw_shifts(prng, r, f.dimension);
  std::vector<double> reps(r);
  const auto rr = static_cast<std::ptrdiff_t>(r);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < rr; ++j) {
    reps[static_cast<std::size_t>(j)] = replicate_mean(f, gen, shifts[static_cast<std::size_t>(j)], n);
  }
  return rqmc_finish(std::move(reps), n);
}

std::vector<ErrorPoint> absolute_error_trace(const Integrand& f, double true_value, EstimatorKind kind,
                                             std::span<const std::uint64_t> n_grid,
                                             std::span<const std::uint64_t> seeds) {
  check_integrand(f);
  if (n_grid.empty()) throw std::invalid_argument("absolute_error_trace needs a non-empty grid");
  if (!std::is_sorted(n_grid.begin(), n_grid.end()) || n_grid.front() == 0) {
    throw std::invalid_argument("grid must be positive and increasing");
  }
  if (kind != EstimatorKind::kQmc && seeds.empty()) throw std::invalid_argument("MC/RQMC traces need seeds");

  // errors[g][s]: grid point g, seed s.
  const std::size_t streams = kind == EstimatorKind::kQmc ? 1 : seeds.size();
  std::vector<std::vector<double>> errors(n_grid.size(), std::vector<double>(streams));
  std::vector<double> x(f.dimension);

  for (std::size_t s = 0; s < streams; ++s) {
    SobolGenerator sobol(f.dimension);
    PseudoRandomGenerator prng(kind == EstimatorKind::kQmc ? 0 : seeds[s]);
    std::vector<double> shift(f.dimension, 0.0);
    if (kind == EstimatorKind::kRqmc) prng.fill(shift);
    double sum = 0.0;
    std::uint64_t done = 0;
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
      for (; done < n_grid[g]; ++done) {
        if (kind == EstimatorKind::kMc) {
          prng.fill(x);
        } else {
          sobol.next(x);
          shift_in_place(x, shift);
        }
        sum += f(x);
      }
      errors[g][s] = std::fabs(sum / static_cast<double>(done) - true_value);
    }
  }

  std::vector<ErrorPoint> out;
  out.reserve(n_grid.size());
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    double mean = 0.0;
    for (double e : errors[g]) mean += e;
    mean /= static_cast<double>(errors[g].size());
    out.push_back({n_grid[g], mean, median(errors[g])});
  }
  return out;
}

std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi, std::size_t points_per_decade) {
  if (lo == 0 || hi < lo || points_per_decade == 0) throw std::invalid_argument("bad log grid bounds");
  std::set<std::uint64_t> grid;
  const double step = 1.0 / static_cast<double>(points_per_decade);
  for (double e = std::log10(static_cast<double>(lo)); e < std::log10(static_cast<double>(hi)); e += step) {
    grid.insert(static_cast<std::uint64_t>(std::llround(std::pow(10.0, e))));
  }
  grid.insert(hi);
  return {grid.begin(), grid.end()};
}

}  // namespace probci
