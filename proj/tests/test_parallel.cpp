#include <doctest.h>

#include "probci/engine.hpp"
#include "probci/harness.hpp"
#include "probci/estimators.hpp"
#include "probci/sequences.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace probci;

// Each OpenMP kernel must agree bit for bit with its serial reference,
// whatever the thread count.
namespace {

void with_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace

TEST_CASE("star discrepancy parallel equals serial") {
  PseudoRandomGenerator g(31);
  std::vector<UnitPoint> pts;
  for (int i = 0; i < 150; ++i) pts.push_back(g.next(2));
  const double serial = star_discrepancy_2d_serial(pts);
  for (int t : {1, 2, 4}) {
    with_threads(t);
    CHECK(star_discrepancy_2d(pts) == serial);
  }
}

TEST_CASE("rqmc parallel equals serial") {
  const Integrand f{[](std::span<const double> u) { return u[0] * u[1]; }, 2, std::nullopt};
  SobolGenerator gen(2);
  gen.next();
  gen.next();  // non-zero start index
  for (int t : {1, 3}) {
    with_threads(t);
    PseudoRandomGenerator a(77), b(77);
    const auto p = rqmc_estimate(f, gen, a, 500, 10);
    const auto s = rqmc_estimate_serial(f, gen, b, 500, 10);
    CHECK(p.replicates == s.replicates);
    CHECK(p.estimate == s.estimate);
    CHECK(*p.variance == *s.variance);
  }
}

TEST_CASE("averaged runs parallel equals serial") {
  SequentialTask t;
  t.f = BernoulliOracle{0.05}.integrand();
  t.method = IntervalMethod::kWilson;
  t.rule.confidence = 0.99;
  t.rule.half_width = 1e-2;
  for (int n : {1, 4}) {
    with_threads(n);
    const auto p = averaged_runs(t, 13, 6);
    const auto s = averaged_runs_serial(t, 13, 6);
    CHECK(p.mean_lo == s.mean_lo);
    CHECK(p.mean_hi == s.mean_hi);
    CHECK(p.mean_n_used == s.mean_n_used);
    for (std::size_t i = 0; i < p.runs.size(); ++i) CHECK(p.runs[i].n_used == s.runs[i].n_used);
  }
}

TEST_CASE("harness output does not depend on the thread count") {
  auto m = ExperimentManifest::defaults(ExperimentKind::kBorderSweep);
  m.probabilities = {0.003, 0.007};
  m.confidences = {0.99, 0.999};
  m.runs = 3;
  with_threads(1);
  const auto one = run_experiment(m);
  with_threads(4);
  const auto four = run_experiment(m);
  REQUIRE(one.files.size() == four.files.size());
  for (std::size_t i = 0; i < one.files.size(); ++i) CHECK(one.files[i].content == four.files[i].content);
}
