// Experiment runner behind the CLI: manifests, sweeps, CSV tables and SVG
// figures. Every SVG is rendered from CSV text alone.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "probci/engine.hpp"
#include "probci/intervals.hpp"
#include "probci/models.hpp"

namespace probci {

enum class ExperimentKind { kBorderSweep, kProbabilitySweep, kTableRows, kConvergence, kDiscrepancy };
std::string_view experiment_tag(ExperimentKind k);
std::optional<ExperimentKind> parse_experiment(std::string_view tag);

/// TOML-style `key = value` text; lists are comma separated, `#` starts a
/// comment. Unknown keys and unknown method/sampler tags are errors.
struct ExperimentManifest {
  ExperimentKind kind = ExperimentKind::kBorderSweep;
  std::vector<double> probabilities;
  std::vector<double> confidences;
  double half_width = 5e-3;
  std::vector<IntervalMethod> methods;
  /// Overrides the per-method default for non-Qint methods (mc or rqmc).
  std::optional<SamplerKind> sampler;
  std::size_t runs = 10;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
  CltFloor clt_floor = CltFloor::kVariance;
  BetaParams prior = BetaParams::jeffreys();
  std::uint64_t max_samples = 10'000'000;
  // convergence
  std::string model = "good";
  double model_param = 0.5;
  std::uint64_t n_max = 10'000;
  std::size_t points_per_decade = 10;
  std::size_t mc_seeds = 10;
  // discrepancy
  std::size_t points = 300;
  std::size_t prng_sets = 20;

  /// Published defaults for each experiment.
  static ExperimentManifest defaults(ExperimentKind kind);
  /// Starts from defaults(kind-in-text or fallback) and applies the keys.
  static ExperimentManifest parse(std::istream& in, ExperimentKind fallback = ExperimentKind::kBorderSweep);
  static ExperimentManifest load(const std::filesystem::path& path,
                                 ExperimentKind fallback = ExperimentKind::kBorderSweep);
  /// Applies one key (used by the parser and by CLI overrides).
  void set(std::string_view key, std::string_view value);
  void validate() const;
  std::string serialize() const;
};

/// Minimal CSV reader/writer for the harness tables. Lines starting with '#'
/// carry the schema version and are kept as comments.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static CsvTable parse(std::string_view text);
  std::string str() const;
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
  const std::string& text(std::size_t row, std::string_view name) const;
};

inline constexpr std::string_view kCsvSchema = "probci-csv v1";

struct OutputFile {
  std::string name;
  std::string content;
};

struct ExperimentOutput {
  std::vector<OutputFile> files;
  const OutputFile* find(std::string_view name) const;
};

ExperimentOutput run_border_sweep(const ExperimentManifest& m);
ExperimentOutput run_probability_sweep(const ExperimentManifest& m);
ExperimentOutput run_table_rows(const ExperimentManifest& m);
ExperimentOutput run_convergence(const ExperimentManifest& m);
ExperimentOutput run_discrepancy(const ExperimentManifest& m);
ExperimentOutput run_experiment(const ExperimentManifest& m);

/// Writes every file (plus manifest.txt) into m.out_dir.
void write_output(const ExperimentOutput& out, const ExperimentManifest& m);

/// Interval whiskers per method, one panel per confidence.
std::string render_interval_svg(const CsvTable& summary);
/// Mean samples used against p, one line per method and panel per confidence.
std::string render_samples_svg(const CsvTable& summary);
/// Absolute error against n on log-log axes.
std::string render_convergence_svg(const CsvTable& trace);
/// Scatter of each point set (columns set, x, y) titled with its D*.
std::string render_discrepancy_svg(const CsvTable& points, const CsvTable& summary);

/// Good/bad analytic rows: name, kind, model parameter, true p.
struct TableRowSpec {
  std::string name;
  ModelKind kind;
  double n_param;
  double p_true;
};
std::vector<TableRowSpec> table_row_specs();

/// Sequential task for one sweep cell, honouring the manifest's options.
SequentialTask make_task(const ExperimentManifest& m, const Integrand& f, IntervalMethod method, double confidence);
/// Seed for a (probability, confidence) cell; the method is deliberately not
/// part of it so all methods see the same streams.
std::uint64_t cell_seed(std::uint64_t master, std::size_t p_index, std::size_t c_index);

}  // namespace probci
