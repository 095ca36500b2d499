#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "probci/engine.hpp"

using namespace probci;

namespace {

SequentialTask task_for(const Integrand& f, IntervalMethod m, double c, double eps = 5e-3) {
  SequentialTask t;
  t.f = f;
  t.method = m;
  t.sampler = default_sampler(m);
  t.rule.confidence = c;
  t.rule.half_width = eps;
  return t;
}

Integrand zero() {
  return {[](std::span<const double>) { return 0.0; }, 1, std::pair{0.0, 0.0}};
}

}  // namespace

TEST_CASE("stopping rule validation") {
  StoppingRule r;
  r.validate();
  r.half_width = 0.0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r = {};
  r.confidence = 1.0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r = {};
  r.batch = 0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("sampler defaults and tags") {
  CHECK(default_sampler(IntervalMethod::kBayesian) == SamplerKind::kMc);
  CHECK(default_sampler(IntervalMethod::kClopperPearson) == SamplerKind::kMc);
  CHECK(default_sampler(IntervalMethod::kQint) == SamplerKind::kQint);
  CHECK(default_sampler(IntervalMethod::kWilson) == SamplerKind::kRqmc);
  CHECK(parse_sampler(sampler_tag(SamplerKind::kRqmc)) == SamplerKind::kRqmc);
}

TEST_CASE("zero oracle stops quickly with the floored clt") {
  for (SamplerKind s : {SamplerKind::kMc, SamplerKind::kRqmc}) {
    auto t = task_for(zero(), IntervalMethod::kClt, 0.99);
    t.sampler = s;
    const auto r = sequential_estimate(t, 1);
    CHECK(r.converged);
    CHECK(r.interval.lo == 0.0);
    CHECK(r.interval.hi <= 0.005);
    CHECK(r.n_used < 500);
  }
}

TEST_CASE("textbook clt on a zero oracle stops at once with zero width") {
  auto t = task_for(zero(), IntervalMethod::kClt, 0.99);
  t.interval.clt_floor = CltFloor::kNone;
  t.sampler = SamplerKind::kMc;
  t.rule.min_samples = 2;
  const auto r = sequential_estimate(t, 1);
  // zero width from the second sample on: an empty interval at p-hat = 0
  CHECK(r.converged);
  CHECK(r.n_used == 2);
}

TEST_CASE("max_samples ends an unconverged run with its last interval") {
  auto t = task_for(BernoulliOracle{0.5}.integrand(), IntervalMethod::kWilson, 0.99, 1e-4);
  t.rule.max_samples = 2000;
  const auto r = sequential_estimate(t, 3);
  CHECK_FALSE(r.converged);
  CHECK(r.n_used >= 2000);
  CHECK(r.interval.half_width > 1e-4);
}

TEST_CASE("qint runs double the sample count and need the qint sampler") {
  auto t = task_for(BernoulliOracle{0.1}.integrand(), IntervalMethod::kQint, 0.99);
  t.record_trajectory = true;
  const auto r = sequential_estimate(t, 4);
  CHECK(r.converged);
  CHECK(r.interval.contains(0.1));
  REQUIRE(r.qint_schedule.size() >= 2);
  for (std::size_t i = 1; i < r.qint_schedule.size(); ++i) CHECK(r.qint_schedule[i] == 2 * r.qint_schedule[i - 1]);
  CHECK(r.n_used == r.qint_schedule.back());

  t.sampler = SamplerKind::kMc;
  CHECK_THROWS_AS(sequential_estimate(t, 4), std::invalid_argument);
  auto w = task_for(BernoulliOracle{0.1}.integrand(), IntervalMethod::kWilson, 0.99);
  w.sampler = SamplerKind::kQint;
  CHECK_THROWS_AS(sequential_estimate(w, 4), std::invalid_argument);
}

TEST_CASE("stopping soundness and trajectory") {
  for (IntervalMethod m : closed_form_methods()) {
    auto t = task_for(BernoulliOracle{0.02}.integrand(), m, 0.999, 1e-2);
    t.record_trajectory = true;
    const auto r = sequential_estimate(t, 9);
    CHECK(r.converged);
    CHECK(r.interval.half_width <= 1e-2);
    CHECK(r.interval.n_used == r.n_used);
    REQUIRE(!r.trajectory.empty());
    CHECK(r.trajectory.back().n == r.n_used);
    for (std::size_t i = 1; i < r.trajectory.size(); ++i) CHECK(r.trajectory[i].n > r.trajectory[i - 1].n);
    // dense checks up to 1000 samples, then every 16
    for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
      if (r.trajectory[i].n > 1010) {
        CHECK(r.trajectory[i].n - r.trajectory[i - 1].n <= 16 + 10);
      }
    }
  }
}

TEST_CASE("averaging protocol") {
  auto t = task_for(good_bad_integrand(ModelKind::kGood, 1.0), IntervalMethod::kClt, 0.99);
  const auto one = averaged_runs(t, 5, 1);
  const auto single = sequential_estimate(t, run_seed(5, 0));
  CHECK(one.mean_lo == single.interval.lo);
  CHECK(one.mean_hi == single.interval.hi);
  CHECK(one.mean_n_used == static_cast<double>(single.n_used));

  const auto a = averaged_runs(t, 5, 10);
  const auto b = averaged_runs(t, 5, 10);
  CHECK(a.mean_lo == b.mean_lo);
  CHECK(a.mean_hi == b.mean_hi);
  CHECK(a.mean_n_used == b.mean_n_used);
  CHECK(a.contains(0.1));
  CHECK(a.runs.size() == 10);
  CHECK_THROWS_AS(averaged_runs(t, 5, 0), std::invalid_argument);
}

TEST_CASE("replicate-means mode is clt only") {
  auto t = task_for(BernoulliOracle{0.3}.integrand(), IntervalMethod::kClt, 0.99, 1e-2);
  t.rqmc_mode = RqmcMode::kReplicateMeans;
  const auto r = sequential_estimate(t, 2);
  CHECK(r.converged);
  CHECK(r.interval.half_width <= 1e-2);
  CHECK(std::fabs(r.estimate() - 0.3) < 0.05);
  t.method = IntervalMethod::kWilson;
  CHECK_THROWS_AS(sequential_estimate(t, 2), std::invalid_argument);
}

TEST_CASE("mid-range probabilities need about the same samples across the clt family") {
  std::vector<double> n;
  for (IntervalMethod m : {IntervalMethod::kClt, IntervalMethod::kWilson, IntervalMethod::kAgrestiCoull,
                           IntervalMethod::kLogit, IntervalMethod::kAnscombe}) {
    n.push_back(averaged_runs(task_for(BernoulliOracle{0.5}.integrand(), m, 0.99), 1, 3).mean_n_used);
  }
  const auto [lo, hi] = std::minmax_element(n.begin(), n.end());
  CHECK(*hi <= 1.1 * *lo);
}

TEST_CASE("validated estimation extremes") {
  StoppingRule rule;
  rule.confidence = 0.99;
  rule.half_width = 1e-2;
  const auto undet = validated_estimate([](std::span<const double>) { return Verdict::kUndet; }, 1,
                                        IntervalMethod::kClt, rule, SamplerKind::kMc, 1);
  CHECK(undet.lower.estimate() == 0.0);
  CHECK(undet.upper.estimate() == 1.0);

  const auto decided = validated_estimate(
      [](std::span<const double> u) { return u[0] < 0.3 ? Verdict::kSat : Verdict::kUnsat; }, 1,
      IntervalMethod::kWilson, rule, SamplerKind::kRqmc, 1, {}, true);
  for (const auto& p : decided.trajectory) CHECK(p.lower == p.upper);
  CHECK(decided.gap() == 0.0);
  CHECK_THROWS_AS(validated_estimate([](std::span<const double>) { return Verdict::kSat; }, 1, IntervalMethod::kClt,
                                     rule, SamplerKind::kQint, 1),
                  std::invalid_argument);
}

TEST_CASE("validated enclosure on the banded good model") {
  const BandedPredicate band{ModelKind::kGood, 0.5, 0.01};
  StoppingRule rule;
  rule.confidence = 0.99;
  rule.half_width = 5e-3;
  for (SamplerKind s : {SamplerKind::kMc, SamplerKind::kRqmc}) {
    const auto r = validated_estimate([&](std::span<const double> u) { return banded_verdict(band, u); }, 1,
                                      IntervalMethod::kClt, rule, s, 11, {}, true);
    CHECK(r.ordered);
    for (const auto& p : r.trajectory) REQUIRE(p.lower <= p.upper);
    CHECK(r.enclosure_lo <= 0.1);
    CHECK(r.enclosure_hi >= 0.1);
    // width is at most both half-widths plus the observed Undet fraction
    CHECK(r.enclosure_hi - r.enclosure_lo <= 2 * 5e-3 + r.gap() + 1e-12);
    CHECK(std::fabs(r.gap() - banded_undet_measure(band)) < 0.01);
  }
}

TEST_CASE("clopper-pearson sequential coverage over 500 runs") {
  for (double p : {0.001, 0.005, 0.01, 0.1}) {
    auto t = task_for(BernoulliOracle{p}.integrand(), IntervalMethod::kClopperPearson, 0.99);
    const auto agg = averaged_runs(t, derive_seed(1234, {static_cast<std::uint64_t>(p * 1e6)}), 500);
    const auto covered = std::count_if(agg.runs.begin(), agg.runs.end(),
                                       [p](const SequentialReport& r) { return r.interval.contains(p); });
    CHECK_MESSAGE(static_cast<double>(covered) / 500.0 >= 0.97, "p=" << p << " covered " << covered);
  }
}
