// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Everything runs from master seed 1.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "coverage.hpp"
#include "probci/engine.hpp"
#include "probci/harness.hpp"
#include "probci/qint.hpp"
#include "probci_reference/crosscheck.hpp"

using namespace probci;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Mean n_used per method tag for one (p, c) cell run through the harness.
std::map<std::string, double> cell_samples(double p, double c, const std::string& methods) {
  auto m = ExperimentManifest::defaults(ExperimentKind::kBorderSweep);
  m.probabilities = {p};
  m.confidences = {c};
  m.set("methods", methods);
  m.seed = kSeed;
  const auto t = CsvTable::parse(run_experiment(m).find("border_sweep.csv")->content);
  std::map<std::string, double> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) out[t.text(r, "method")] = t.number(r, "n_used");
  return out;
}

Outcome oracle_equivalence() {
  const auto r = reference::crosscheck_intervals(200, 1e-6);
  std::ostringstream os;
  os << r.comparisons << " endpoint pairs, " << r.failures << " beyond 1e-6, worst " << static_cast<double>(r.worst);
  return {r.ok(), os.str()};
}

Outcome published_sample_counts() {
  const auto n = cell_samples(0.005, 0.9999, "clt,arcsine,bayes");
  const std::pair<const char*, double> published[] = {{"clt", 1078}, {"arcsine", 2662}, {"bayes", 4440}};
  bool ok = true;
  std::ostringstream os;
  for (const auto& [tag, want] : published) {
    const double got = n.at(tag);
    const bool in = std::fabs(got - want) <= 0.4 * want;
    ok = ok && in;
    os << tag << ' ' << got << " (published " << want << (in ? ") " : ", outside +-40%) ");
  }
  const bool ordered = n.at("clt") < n.at("arcsine") && n.at("arcsine") < n.at("bayes");
  os << (ordered ? "ordered" : "NOT ordered");
  return {ok && ordered, os.str()};
}

Outcome table_rows() {
  auto m = ExperimentManifest::defaults(ExperimentKind::kTableRows);
  m.seed = kSeed;
  const auto t = CsvTable::parse(run_experiment(m).find("table_rows.csv")->content);
  bool ok = true;
  std::ostringstream os;
  int misses = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double p = t.number(r, "p_true");
    const std::string& method = t.text(r, "method");
    const double lo = t.number(r, "lo");
    const double hi = t.number(r, "hi");
    const bool tiny = p < 1e-6;
    if (!(tiny && method == "arcsine") && !(lo <= p && p <= hi)) {
      ok = false;
      ++misses;
      os << "[" << t.text(r, "model") << " p=" << p << " c=" << t.text(r, "confidence") << ' ' << method << " ["
         << lo << ", " << hi << "] misses] ";
    }
    if (tiny && (method == "clt" || method == "qint" || method == "bayes") && !(lo == 0.0 && hi <= 0.00525)) {
      ok = false;
      ++misses;
      os << "[p=4e-7 c=" << t.text(r, "confidence") << ' ' << method << " [" << lo << ", " << hi
         << "] not [0, <=0.00525]] ";
    }
  }
  if (ok) os << t.rows.size() << " rows, all contain the true p";
  return {ok, std::to_string(misses) + " violations " + os.str()};
}

const char* kExpectedOrder[] = {"clt", "qint", "arcsine", "wilson", "logit", "anscombe", "acw", "bayes"};

Outcome border_ordering() {
  const auto n = cell_samples(0.005, 0.99999, "clt,qint,arcsine,wilson,logit,anscombe,acw,bayes");
  std::ostringstream os;
  bool ok = true;
  for (std::size_t i = 0; i < std::size(kExpectedOrder); ++i) {
    os << kExpectedOrder[i] << '=' << n.at(kExpectedOrder[i]) << ' ';
    for (std::size_t j = i + 1; j < std::size(kExpectedOrder); ++j) {
      if (n.at(kExpectedOrder[i]) > 1.05 * n.at(kExpectedOrder[j])) {
        ok = false;
        os << "(" << kExpectedOrder[i] << " > " << kExpectedOrder[j] << ") ";
      }
    }
  }
  return {ok, os.str()};
}

Outcome mid_range() {
  auto m = ExperimentManifest::defaults(ExperimentKind::kProbabilitySweep);
  m.probabilities = {0.5};
  m.seed = kSeed;
  const auto t = CsvTable::parse(run_experiment(m).find("prob_sweep.csv")->content);
  std::map<std::string, double> n;
  for (std::size_t r = 0; r < t.rows.size(); ++r) n[t.text(r, "method")] = t.number(r, "n_used");
  const char* family[] = {"clt", "wilson", "logit", "anscombe", "acw", "bayes"};
  double lo = 1e300, hi = 0.0;
  for (const char* f : family) {
    lo = std::min(lo, n.at(f));
    hi = std::max(hi, n.at(f));
  }
  const bool agree = hi <= 1.1 * lo;
  bool arc_max = true;
  for (const auto& [tag, v] : n) arc_max = arc_max && (tag == "arcsine" || v < n.at("arcsine"));
  std::ostringstream os;
  for (const auto& [tag, v] : n) os << tag << '=' << v << ' ';
  os << "| family spread " << fmt("%.3f", hi / lo) << (agree ? " ok" : " >1.1") << ", arcsine "
     << (arc_max ? "largest" : "NOT largest");
  return {agree && arc_max, os.str()};
}

Outcome qmc_vs_mc() {
  const std::vector<std::uint64_t> grid{10000};
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < 10; ++i) seeds.push_back(run_seed(kSeed, i));
  const std::pair<const char*, std::pair<Integrand, double>> cases[] = {
      {"good", {good_bad_integrand(ModelKind::kGood, 0.5), 0.1}},
      {"u", {Integrand{[](std::span<const double> u) { return u[0]; }, 1, std::pair{0.0, 1.0}}, 0.5}},
  };
  bool ok = true;
  std::ostringstream os;
  for (const auto& [name, fc] : cases) {
    const double q = absolute_error_trace(fc.first, fc.second, EstimatorKind::kQmc, grid, seeds)[0].mean_abs_error;
    const double mc = absolute_error_trace(fc.first, fc.second, EstimatorKind::kMc, grid, seeds)[0].median_abs_error;
    ok = ok && q < mc;
    os << name << ": qmc " << q << " vs mc median " << mc << "; ";
  }
  return {ok, os.str()};
}

Outcome exact_coverage() {
  bool ok = true;
  double worst = 1.0;
  for (double p : {0.005, 0.01, 0.1, 0.5}) {
    for (std::uint64_t n : {50u, 200u}) {
      const double cov = testing::exact_coverage(IntervalMethod::kClopperPearson, n, p, 0.95);
      worst = std::min(worst, cov);
      ok = ok && cov >= 0.95;
    }
  }
  IntervalOptions textbook;
  textbook.clt_floor = CltFloor::kNone;
  const double clt = testing::exact_coverage(IntervalMethod::kClt, 100, 0.005, 0.95, textbook);
  ok = ok && clt < 0.95;
  return {ok, "min CP coverage " + fmt("%.5f", worst) + " (c=0.95), textbook CLT at p=0.005 n=100: " +
                  fmt("%.5f", clt)};
}

Outcome qint_reduction() {
  PseudoRandomGenerator g(derive_seed(kSeed, {8}));
  std::size_t violations = 0;
  std::size_t strict = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t dim = 1 + g.bits() % 2;
    const std::size_t k = 1 + g.bits() % 4;
    const unsigned s = static_cast<unsigned>(g.bits() % 9);
    std::vector<double> a(dim), b(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      const double x = g.uniform();
      const double y = g.uniform();
      a[d] = std::min(x, y);
      b[d] = std::max(x, y);
    }
    const Integrand f{[a, b](std::span<const double> u) {
                        for (std::size_t d = 0; d < u.size(); ++d) {
                          if (u[d] < a[d] || u[d] >= b[d]) return 0.0;
                        }
                        return 1.0;
                      },
                      dim, std::pair{0.0, 1.0}};
    SobolGenerator gen(dim);
    std::vector<std::uint32_t> shift(dim);
    for (auto& x : shift) x = static_cast<std::uint32_t>(g.bits() >> 32);
    gen.set_digital_shift(shift);
    const auto part = qint_partition(gen, k, s);
    std::vector<double> v(part.n());
    double mean = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) mean += v[i] = f(part.point(i));
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double n = static_cast<double>(v.size());
    const double mc = v.size() > 1 ? ss / (n - 1) / n : 0.0;
    const auto strata = qint_strata(v, part);
    double mlo = 1e300, mhi = -1e300;
    for (const auto& st : strata) {
      mlo = std::min(mlo, st.mean);
      mhi = std::max(mhi, st.mean);
    }
    const auto q = qint_variance(strata, k, mc);
    if (q.variance > mc) ++violations;
    if (mhi - mlo > 1e-6) {
      ++strict;
      if (!(q.variance < mc)) ++violations;
    }
  }
  std::size_t const_violations = 0;
  for (double c : {0.0, 0.3, 1.0}) {
    const Integrand f{[c](std::span<const double>) { return c; }, 2, std::pair{c, c}};
    const auto part = qint_partition(SobolGenerator(2), 2, 6);
    const auto q = qint_variance(f, part, 0.0);
    if (std::fabs(q.variance - q.mc_variance) > 1e-12) ++const_violations;
  }
  return {violations == 0 && const_violations == 0,
          std::to_string(violations) + " violations over 1000 integrands (" + std::to_string(strict) +
              " with distinct stratum means), " + std::to_string(const_violations) + " on constants"};
}

Outcome discrepancy() {
  auto m = ExperimentManifest::defaults(ExperimentKind::kDiscrepancy);
  m.seed = kSeed;
  const auto t = CsvTable::parse(run_experiment(m).find("discrepancy.csv")->content);
  double sobol = -1, median = -1;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.text(r, "set") == "sobol") sobol = t.number(r, "star_discrepancy");
    if (t.text(r, "set") == "prng-median") median = t.number(r, "star_discrepancy");
  }
  const std::vector<UnitPoint> centre{UnitPoint({0.5, 0.5})};
  const double single = star_discrepancy_2d(centre);
  return {sobol < median && single == 0.75,
          "D*(sobol, 300) " + fmt("%.5f", sobol) + " vs prng median " + fmt("%.5f", median) +
              "; single point " + fmt("%.17g", single)};
}

Outcome validated_sandwich() {
  const BandedPredicate band{ModelKind::kGood, 0.5, 0.01};
  StoppingRule rule;
  rule.confidence = 0.99;
  rule.half_width = 1e-12;  // never met: run to the 1e5 budget
  rule.max_samples = 100000;
  const auto r = validated_estimate([&](std::span<const double> u) { return banded_verdict(band, u); }, 1,
                                    IntervalMethod::kClt, rule, default_sampler(IntervalMethod::kClt), kSeed);
  const bool encloses = r.enclosure_lo <= 0.1 && 0.1 <= r.enclosure_hi;
  const double undet = banded_undet_measure(band);
  const bool gap_ok = std::fabs(r.gap() - undet) <= 0.01;
  return {encloses && gap_ok && r.ordered,
          "n=" + std::to_string(r.lower.n_used) + " enclosure [" + fmt("%.5f", r.enclosure_lo) + ", " +
              fmt("%.5f", r.enclosure_hi) + "], gap " + fmt("%.5f", r.gap()) + " vs undet " + fmt("%.2f", undet)};
}

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "interval oracle equivalence", 60, oracle_equivalence},
      {2, "published sample counts at p=0.005 c=0.9999", 60, published_sample_counts},
      {3, "good/bad analytic rows", 300, table_rows},
      {4, "border sweep ordering at p=0.005 c=0.99999", 300, border_ordering},
      {5, "mid-range equivalence at p=0.5 c=0.99999", 300, mid_range},
      {6, "qmc beats mc at n=1e4", 60, qmc_vs_mc},
      {7, "exact coverage", 10, exact_coverage},
      {8, "qint variance reduction", 30, qint_reduction},
      {9, "star discrepancy", 30, discrepancy},
      {10, "validated sandwich", 30, validated_sandwich},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("criterion %2d %s: %s | %s | %.1fs of %.0fs%s\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : " (over budget)");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
