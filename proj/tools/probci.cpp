// probci: sweeps, convergence and discrepancy experiments, single estimates
// and the interval self-test. Failures print one JSON error record to stderr.
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "probci/engine.hpp"
#include "probci/harness.hpp"
#include "probci_reference/crosscheck.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string manifest;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> runs;
  std::vector<double> confidences;
  std::optional<double> half_width;
  std::vector<std::string> methods;
  std::optional<std::string> sampler;
  std::optional<std::string> clt_floor;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--manifest", f.manifest, "key = value manifest file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--out-dir", f.out_dir, "output directory");
  cmd->add_option("--runs", f.runs, "runs averaged per cell");
  cmd->add_option("--confidence", f.confidences, "confidence level(s)")->delimiter(',');
  cmd->add_option("--half-width", f.half_width, "target half-width eps");
  cmd->add_option("--method", f.methods, "interval method tag(s)")->delimiter(',');
  cmd->add_option("--sampler", f.sampler, "mc or rqmc (non-Qint methods)");
  cmd->add_option("--clt-floor", f.clt_floor, "variance, sd or none");
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

probci::ExperimentManifest build_manifest(probci::ExperimentKind kind, const CommonFlags& f) {
  auto m = f.manifest.empty() ? probci::ExperimentManifest::defaults(kind)
                              : probci::ExperimentManifest::load(f.manifest, kind);
  if (m.kind != kind) {
    throw std::invalid_argument("manifest experiment '" + std::string(probci::experiment_tag(m.kind)) +
                                "' does not match subcommand '" + std::string(probci::experiment_tag(kind)) + "'");
  }
  if (f.seed) m.seed = *f.seed;
  if (f.out_dir) m.out_dir = *f.out_dir;
  if (f.runs) m.runs = *f.runs;
  if (!f.confidences.empty()) m.confidences = f.confidences;
  if (f.half_width) m.half_width = *f.half_width;
  if (!f.methods.empty()) m.set("methods", join(f.methods));
  if (f.sampler) m.set("sampler", *f.sampler);
  if (f.clt_floor) m.set("clt_floor", *f.clt_floor);
  m.validate();
  return m;
}

int run_experiment_command(probci::ExperimentKind kind, const CommonFlags& f) {
  const auto m = build_manifest(kind, f);
  const auto out = probci::run_experiment(m);
  probci::write_output(out, m);
  json files = json::array();
  for (const auto& file : out.files) files.push_back((m.out_dir / file.name).string());
  std::cout << json{{"experiment", probci::experiment_tag(kind)}, {"seed", m.seed}, {"files", files}}.dump(2)
            << '\n';
  return 0;
}

struct EstimateFlags {
  std::string model = "good";
  double param = 0.5;
  std::string method = "clt";
  std::optional<std::string> sampler;
  double confidence = 0.99;
  double half_width = 5e-3;
  std::uint64_t seed = 1;
  std::size_t runs = 1;
  std::string clt_floor = "variance";
  std::uint64_t max_samples = 10'000'000;
};

int run_estimate(const EstimateFlags& e) {
  using namespace probci;
  const auto method = parse_method(e.method);
  if (!method) throw std::invalid_argument("unknown method '" + e.method + "'");
  Integrand f;
  double truth = 0.0;
  if (e.model == "bernoulli") {
    f = BernoulliOracle{e.param}.integrand();
    truth = e.param;
  } else if (auto kind = parse_model(e.model)) {
    f = good_bad_integrand(*kind, e.param);
    truth = good_bad_probability(*kind, e.param);
  } else {
    throw std::invalid_argument("unknown model '" + e.model + "' (good, bad or bernoulli)");
  }
  SequentialTask task;
  task.f = f;
  task.method = *method;
  task.rule.confidence = e.confidence;
  task.rule.half_width = e.half_width;
  task.rule.max_samples = e.max_samples;
  task.sampler = default_sampler(*method);
  if (e.sampler) {
    const auto s = parse_sampler(*e.sampler);
    if (!s) throw std::invalid_argument("unknown sampler '" + *e.sampler + "'");
    task.sampler = *s;
  }
  const auto floor = parse_clt_floor(e.clt_floor);
  if (!floor) throw std::invalid_argument("unknown clt floor '" + e.clt_floor + "'");
  task.interval.clt_floor = *floor;
  task.rule.validate();

  const AveragedReport r = averaged_runs(task, e.seed, e.runs);
  json runs = json::array();
  for (const auto& run : r.runs) {
    runs.push_back({{"lo", run.interval.lo},
                    {"hi", run.interval.hi},
                    {"n_used", run.n_used},
                    {"successes", run.successes},
                    {"converged", run.converged},
                    {"seed", run.seed}});
  }
  json out{{"model", e.model},
           {"p_true", truth},
           {"method", method_tag(*method)},
           {"sampler", sampler_tag(task.sampler)},
           {"confidence", e.confidence},
           {"half_width", e.half_width},
           {"seed", e.seed},
           {"mean_lo", r.mean_lo},
           {"mean_hi", r.mean_hi},
           {"mean_n_used", r.mean_n_used},
           {"contains_truth", r.contains(truth)},
           {"all_converged", r.all_converged},
           {"runs", runs}};
  std::cout << out.dump(2) << '\n';
  return r.all_converged ? 0 : 3;
}

int run_selftest(std::uint64_t max_n, double tol) {
  const auto r = probci::reference::crosscheck_intervals(max_n, tol);
  std::cout << json{{"selftest", "interval-oracle-equivalence"},
                    {"comparisons", r.comparisons},
                    {"failures", r.failures},
                    {"worst_abs_error", static_cast<double>(r.worst)},
                    {"worst_case", r.worst_case},
                    {"tolerance", tol},
                    {"passed", r.ok()}}
                   .dump(2)
            << '\n';
  return r.ok() ? 0 : 4;
}

void print_error(const std::string& kind, const std::string& message, int code) {
  std::cerr << json{{"error", {{"type", kind}, {"message", message}, {"exit_code", code}}}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo / QMC probability estimation with sequential confidence intervals"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    probci::ExperimentKind kind;
    const char* help;
  };
  const Sub subs[] = {
      {"border-sweep", probci::ExperimentKind::kBorderSweep, "interval sweep over small probabilities"},
      {"prob-sweep", probci::ExperimentKind::kProbabilitySweep, "samples used across (0,1)"},
      {"table-rows", probci::ExperimentKind::kTableRows, "good/bad model rows with known probability"},
      {"convergence", probci::ExperimentKind::kConvergence, "MC vs QMC absolute error traces"},
      {"discrepancy", probci::ExperimentKind::kDiscrepancy, "star discrepancy of Sobol and pseudorandom sets"},
  };
  std::vector<CommonFlags> flags(std::size(subs));
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    cmds.push_back(app.add_subcommand(subs[i].name, subs[i].help));
    add_common(cmds.back(), flags[i]);
  }

  EstimateFlags est;
  auto* estimate = app.add_subcommand("estimate", "one sequential estimate (optionally averaged)");
  estimate->add_option("--model", est.model, "good, bad or bernoulli");
  estimate->add_option("--param", est.param, "model parameter (n for good/bad, p for bernoulli)");
  estimate->add_option("--method", est.method, "interval method tag");
  estimate->add_option("--sampler", est.sampler, "mc, rqmc or qint");
  estimate->add_option("--confidence", est.confidence, "confidence level");
  estimate->add_option("--half-width", est.half_width, "target half-width eps");
  estimate->add_option("--seed", est.seed, "master seed");
  estimate->add_option("--runs", est.runs, "independent runs to average");
  estimate->add_option("--clt-floor", est.clt_floor, "variance, sd or none");
  estimate->add_option("--max-samples", est.max_samples, "sample budget per run");

  std::uint64_t selftest_n = 200;
  double selftest_tol = 1e-6;
  auto* selftest = app.add_subcommand("selftest", "compare every interval method with the reference oracle");
  selftest->add_option("--max-n", selftest_n, "largest sample size in the grid");
  selftest->add_option("--tolerance", selftest_tol, "absolute endpoint tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what(), 2);
    return 2;
  }

  try {
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      if (cmds[i]->parsed()) return run_experiment_command(subs[i].kind, flags[i]);
    }
    if (estimate->parsed()) return run_estimate(est);
    if (selftest->parsed()) return run_selftest(selftest_n, selftest_tol);
  } catch (const std::invalid_argument& e) {
    print_error("configuration", e.what(), 1);
    return 1;
  } catch (const std::exception& e) {
    print_error("runtime", e.what(), 1);
    return 1;
  }
  return 0;
}
