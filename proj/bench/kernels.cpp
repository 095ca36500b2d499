// Serial reference vs OpenMP kernel for each parallel hot spot.
#include <benchmark/benchmark.h>

#include "probci/engine.hpp"
#include "probci/estimators.hpp"
#include "probci/sequences.hpp"

using namespace probci;

namespace {

std::vector<UnitPoint> sobol_points(std::size_t n) {
  SobolGenerator gen(2);
  std::vector<UnitPoint> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(gen.next());
  return pts;
}

void BM_StarDiscrepancySerial(benchmark::State& state) {
  const auto pts = sobol_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(star_discrepancy_2d_serial(pts));
}
void BM_StarDiscrepancyParallel(benchmark::State& state) {
  const auto pts = sobol_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(star_discrepancy_2d(pts));
}
BENCHMARK(BM_StarDiscrepancySerial)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StarDiscrepancyParallel)->Arg(100)->Arg(300)->Arg(500)->Unit(benchmark::kMillisecond);

const Integrand kSmooth{[](std::span<const double> u) { return u[0] * u[1] + u[1]; }, 2, std::nullopt};

void BM_RqmcSerial(benchmark::State& state) {
  const SobolGenerator gen(2);
  for (auto _ : state) {
    PseudoRandomGenerator prng(1);
    benchmark::DoNotOptimize(rqmc_estimate_serial(kSmooth, gen, prng, static_cast<std::uint64_t>(state.range(0))));
  }
}
void BM_RqmcParallel(benchmark::State& state) {
  const SobolGenerator gen(2);
  for (auto _ : state) {
    PseudoRandomGenerator prng(1);
    benchmark::DoNotOptimize(rqmc_estimate(kSmooth, gen, prng, static_cast<std::uint64_t>(state.range(0))));
  }
}
BENCHMARK(BM_RqmcSerial)->Arg(1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RqmcParallel)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

SequentialTask border_task() {
  SequentialTask t;
  t.f = BernoulliOracle{0.005}.integrand();
  t.method = IntervalMethod::kWilson;
  t.rule.confidence = 0.99999;
  return t;
}

void BM_AveragedRunsSerial(benchmark::State& state) {
  const auto t = border_task();
  for (auto _ : state) benchmark::DoNotOptimize(averaged_runs_serial(t, 1, 10));
}
void BM_AveragedRunsParallel(benchmark::State& state) {
  const auto t = border_task();
  for (auto _ : state) benchmark::DoNotOptimize(averaged_runs(t, 1, 10));
}
BENCHMARK(BM_AveragedRunsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AveragedRunsParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
