#include "probci/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "probci/estimators.hpp"
#include "probci/sequences.hpp"

namespace probci {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

const std::vector<std::string> kIntervalColumns{"experiment", "model", "p_true", "confidence", "method", "sampler",
                                                "run_index", "lo", "hi", "center", "n_used", "seed"};

struct Cell {
  std::string model;
  double p_true = 0.0;
  Integrand f;
  std::size_t p_index = 0;
  std::size_t c_index = 0;
  double confidence = 0.0;
  IntervalMethod method = IntervalMethod::kClt;
  std::uint64_t seed = 0;
  AveragedReport result;
};

SamplerKind cell_sampler(const ExperimentManifest& m, IntervalMethod method) {
  if (method == IntervalMethod::kQint) return SamplerKind::kQint;
  return m.sampler.value_or(default_sampler(method));
}

// Runs every cell (in parallel) and renders the summary and per-run tables.
ExperimentOutput run_cells(const ExperimentManifest& m, std::vector<Cell>& cells, const std::string& stem) {
  std::string error;
  const auto count = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    Cell& c = cells[static_cast<std::size_t>(i)];
    try {
      const SequentialTask task = make_task(m, c.f, c.method, c.confidence);
      c.result = averaged_runs_serial(task, c.seed, m.runs);
    } catch (const std::exception& e) {
#pragma omp critical(probci_cell_error)
      if (error.empty()) error = e.what();
    }
  }
  if (!error.empty()) throw std::runtime_error(error);

  CsvTable summary;
  CsvTable runs;
  const std::string comment = std::string(kCsvSchema) + " " + stem;
  summary.comments = {comment};
  runs.comments = {comment + " runs"};
  summary.header = kIntervalColumns;
  summary.header.push_back("converged");
  runs.header = summary.header;
  const std::string exp(experiment_tag(m.kind));
  for (const Cell& c : cells) {
    const std::string sampler(sampler_tag(cell_sampler(m, c.method)));
    const std::string method(method_tag(c.method));
    summary.rows.push_back({exp, c.model, num(c.p_true), num(c.confidence), method, sampler, "mean",
                            num(c.result.mean_lo), num(c.result.mean_hi), num(c.result.mean_center()),
                            num(c.result.mean_n_used), std::to_string(c.seed), c.result.all_converged ? "1" : "0"});
    for (std::size_t r = 0; r < c.result.runs.size(); ++r) {
      const SequentialReport& rep = c.result.runs[r];
      runs.rows.push_back({exp, c.model, num(c.p_true), num(c.confidence), method, sampler, std::to_string(r),
                           num(rep.interval.lo), num(rep.interval.hi), num(rep.interval.center()),
                           std::to_string(rep.n_used), std::to_string(rep.seed), rep.converged ? "1" : "0"});
    }
  }
  ExperimentOutput out;
  out.files.push_back({stem + ".csv", summary.str()});
  out.files.push_back({stem + "_runs.csv", runs.str()});
  out.files.push_back({stem + ".svg", render_interval_svg(summary)});
  out.files.push_back({stem + "_samples.svg", render_samples_svg(summary)});
  return out;
}

std::vector<Cell> probability_cells(const ExperimentManifest& m) {
  std::vector<Cell> cells;
  for (std::size_t pi = 0; pi < m.probabilities.size(); ++pi) {
    for (std::size_t ci = 0; ci < m.confidences.size(); ++ci) {
      for (IntervalMethod method : m.methods) {
        Cell c;
        c.model = "bernoulli";
        c.p_true = m.probabilities[pi];
        c.f = BernoulliOracle{c.p_true}.integrand();
        c.p_index = pi;
        c.c_index = ci;
        c.confidence = m.confidences[ci];
        c.method = method;
        c.seed = cell_seed(m.seed, pi, ci);
        cells.push_back(std::move(c));
      }
    }
  }
  return cells;
}

}  // namespace

CsvTable CsvTable::parse(std::string_view text) {
  CsvTable t;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      t.comments.emplace_back(line.substr(1));
      continue;
    }
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (t.header.empty()) {
      t.header = std::move(cells);
    } else {
      if (cells.size() != t.header.size()) throw std::runtime_error("csv: ragged row");
      t.rows.push_back(std::move(cells));
    }
  }
  // Comments were stored without their '#'; drop the leading space too.
  for (auto& c : t.comments) {
    if (!c.empty() && c.front() == ' ') c.erase(0, 1);
  }
  return t;
}

std::string CsvTable::str() const {
  std::string out;
  for (const auto& c : comments) out += "# " + c + '\n';
  out += join_row(header) + '\n';
  for (const auto& r : rows) out += join_row(r) + '\n';
  return out;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("csv: no column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::string_view name) const { return std::stod(rows.at(row)[column(name)]); }

const std::string& CsvTable::text(std::size_t row, std::string_view name) const { return rows.at(row)[column(name)]; }

const OutputFile* ExperimentOutput::find(std::string_view name) const {
  for (const auto& f : files) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::vector<TableRowSpec> table_row_specs() {
  std::vector<TableRowSpec> rows{
      {"good-max", ModelKind::kGood, 1.0, 0.1},
      {"good-min", ModelKind::kGood, 0.0, 0.1},
  };
  for (auto [name, p] : {std::pair{"bad-max", 0.95001}, std::pair{"bad-max2", 0.88747}, std::pair{"bad-min", 4e-7}}) {
    rows.push_back({name, ModelKind::kBad, bad_parameter_for_probability(p), p});
  }
  return rows;
}

SequentialTask make_task(const ExperimentManifest& m, const Integrand& f, IntervalMethod method, double confidence) {
  SequentialTask t;
  t.f = f;
  t.method = method;
  t.sampler = cell_sampler(m, method);
  t.rule.confidence = confidence;
  t.rule.half_width = m.half_width;
  t.rule.max_samples = m.max_samples;
  t.interval.clt_floor = m.clt_floor;
  t.interval.prior = m.prior;
  t.qint.floor = m.clt_floor;
  return t;
}

std::uint64_t cell_seed(std::uint64_t master, std::size_t p_index, std::size_t c_index) {
  return derive_seed(master, {0x63656c6cULL, p_index, c_index});
}

ExperimentOutput run_border_sweep(const ExperimentManifest& m) {
  m.validate();
  auto cells = probability_cells(m);
  return run_cells(m, cells, "border_sweep");
}

ExperimentOutput run_probability_sweep(const ExperimentManifest& m) {
  m.validate();
  auto cells = probability_cells(m);
  return run_cells(m, cells, "prob_sweep");
}

ExperimentOutput run_table_rows(const ExperimentManifest& m) {
  m.validate();
  std::vector<Cell> cells;
  const auto specs = table_row_specs();
  for (std::size_t ri = 0; ri < specs.size(); ++ri) {
    for (std::size_t ci = 0; ci < m.confidences.size(); ++ci) {
      for (IntervalMethod method : m.methods) {
        Cell c;
        c.model = specs[ri].name;
        c.p_true = specs[ri].p_true;
        c.f = good_bad_integrand(specs[ri].kind, specs[ri].n_param);
        c.p_index = ri;
        c.c_index = ci;
        c.confidence = m.confidences[ci];
        c.method = method;
        c.seed = cell_seed(m.seed, ri, ci);
        cells.push_back(std::move(c));
      }
    }
  }
  return run_cells(m, cells, "table_rows");
}

ExperimentOutput run_convergence(const ExperimentManifest& m) {
  m.validate();
  Integrand f;
  double truth = 0.0;
  if (m.model == "good" || m.model == "bad") {
    const ModelKind kind = *parse_model(m.model);
    f = good_bad_integrand(kind, m.model_param);
    truth = good_bad_probability(kind, m.model_param);
  } else if (m.model == "bernoulli") {
    f = BernoulliOracle{m.model_param}.integrand();
    truth = m.model_param;
  } else if (m.model == "identity") {
    f = {[](std::span<const double> u) { return u[0]; }, 1, std::pair{0.0, 1.0}};
    truth = 0.5;
  } else {
    const double c = m.model_param;
    f = {[c](std::span<const double>) { return c; }, 1, std::pair{c, c}};
    truth = c;
  }
  const auto grid = log_grid(1, m.n_max, m.points_per_decade);
  std::vector<std::uint64_t> seeds(m.mc_seeds);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = run_seed(m.seed, i);

  CsvTable t;
  t.comments = {std::string(kCsvSchema) + " convergence"};
  t.header = {"experiment", "model", "p_true", "sampler", "n", "mean_abs_error", "median_abs_error", "seeds"};
  for (EstimatorKind kind : {EstimatorKind::kMc, EstimatorKind::kQmc}) {
    const auto trace = absolute_error_trace(f, truth, kind, grid, seeds);
    for (const auto& e : trace) {
      t.rows.push_back({"convergence", m.model, num(truth), std::string(estimator_tag(kind)), std::to_string(e.n),
                        num(e.mean_abs_error), num(e.median_abs_error),
                        std::to_string(kind == EstimatorKind::kQmc ? 0 : seeds.size())});
    }
  }
  ExperimentOutput out;
  out.files.push_back({"convergence.csv", t.str()});
  out.files.push_back({"convergence.svg", render_convergence_svg(t)});
  return out;
}

ExperimentOutput run_discrepancy(const ExperimentManifest& m) {
  m.validate();
  const std::size_t n = m.points;

  std::vector<UnitPoint> sobol;
  SobolGenerator gen(2);
  for (std::size_t i = 0; i < n; ++i) sobol.push_back(gen.next());

  PseudoRandomGenerator shift_rng(derive_seed(m.seed, {0x7368696674ULL}));
  const UnitPoint shift = shift_rng.next(2);
  const auto shifted = randomize_shift(sobol, shift);

  std::vector<std::vector<UnitPoint>> prng_sets(m.prng_sets);
  std::vector<std::uint64_t> prng_seeds(m.prng_sets);
  for (std::size_t s = 0; s < m.prng_sets; ++s) {
    prng_seeds[s] = run_seed(m.seed, s);
    PseudoRandomGenerator rng(prng_seeds[s]);
    for (std::size_t i = 0; i < n; ++i) prng_sets[s].push_back(rng.next(2));
  }

  CsvTable summary;
  summary.comments = {std::string(kCsvSchema) + " discrepancy"};
  summary.header = {"experiment", "set", "n", "seed", "star_discrepancy"};
  auto add = [&](const std::string& set, std::uint64_t seed, double d) {
    summary.rows.push_back({"discrepancy", set, std::to_string(n), std::to_string(seed), num(d)});
  };
  add("sobol", 0, star_discrepancy_2d(sobol));
  add("rsobol", m.seed, star_discrepancy_2d(shifted));
  std::vector<double> prng_d;
  for (std::size_t s = 0; s < m.prng_sets; ++s) {
    prng_d.push_back(star_discrepancy_2d(prng_sets[s]));
    add("prng", prng_seeds[s], prng_d.back());
  }
  std::vector<double> sorted = prng_d;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  add("prng-median", m.seed, sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]));

  CsvTable points;
  points.comments = {std::string(kCsvSchema) + " discrepancy points"};
  points.header = {"set", "seed", "x", "y"};
  auto add_points = [&](const std::string& set, std::uint64_t seed, const std::vector<UnitPoint>& pts) {
    for (const auto& p : pts) points.rows.push_back({set, std::to_string(seed), num(p[0]), num(p[1])});
  };
  add_points("sobol", 0, sobol);
  add_points("rsobol", m.seed, shifted);
  add_points("prng", prng_seeds[0], prng_sets[0]);

  ExperimentOutput out;
  out.files.push_back({"discrepancy.csv", summary.str()});
  out.files.push_back({"discrepancy_points.csv", points.str()});
  out.files.push_back({"discrepancy.svg", render_discrepancy_svg(points, summary)});
  return out;
}

ExperimentOutput run_experiment(const ExperimentManifest& m) {
  switch (m.kind) {
    case ExperimentKind::kBorderSweep: return run_border_sweep(m);
    case ExperimentKind::kProbabilitySweep: return run_probability_sweep(m);
    case ExperimentKind::kTableRows: return run_table_rows(m);
    case ExperimentKind::kConvergence: return run_convergence(m);
    case ExperimentKind::kDiscrepancy: return run_discrepancy(m);
  }
  throw std::invalid_argument("unknown experiment");
}

void write_output(const ExperimentOutput& out, const ExperimentManifest& m) {
  std::filesystem::create_directories(m.out_dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(m.out_dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (m.out_dir / name).string());
    f << content;
  };
  for (const auto& file : out.files) write(file.name, file.content);
  write("manifest.txt", m.serialize());
}

}  // namespace probci
