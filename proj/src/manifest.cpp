#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "probci/harness.hpp"

namespace probci {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = v.find(',');
    const auto item = trim(v.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw std::invalid_argument("manifest: '" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
  }
  return x;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    // Allow 1e7-style counts.
    const double d = to_double(key, v);
    if (d < 0 || d != std::floor(d) || d > 1.8e19) {
      throw std::invalid_argument("manifest: '" + std::string(key) + "' expects a non-negative integer");
    }
    return static_cast<std::uint64_t>(d);
  }
  return x;
}

std::vector<double> to_doubles(std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (auto item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += f(xs[i]);
  }
  return out;
}

const std::vector<IntervalMethod> kDefaultMethods{
    IntervalMethod::kClt,   IntervalMethod::kQint,     IntervalMethod::kArcsine,
    IntervalMethod::kWilson, IntervalMethod::kLogit,   IntervalMethod::kAnscombe,
    IntervalMethod::kAgrestiCoullWilson, IntervalMethod::kBayesian,
};

}  // namespace

std::string_view experiment_tag(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kBorderSweep: return "border-sweep";
    case ExperimentKind::kProbabilitySweep: return "prob-sweep";
    case ExperimentKind::kTableRows: return "table-rows";
    case ExperimentKind::kConvergence: return "convergence";
    case ExperimentKind::kDiscrepancy: return "discrepancy";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment(std::string_view tag) {
  for (auto k : {ExperimentKind::kBorderSweep, ExperimentKind::kProbabilitySweep, ExperimentKind::kTableRows,
                 ExperimentKind::kConvergence, ExperimentKind::kDiscrepancy}) {
    if (experiment_tag(k) == tag) return k;
  }
  if (tag == "probability-sweep") return ExperimentKind::kProbabilitySweep;
  if (tag == "table-row") return ExperimentKind::kTableRows;
  return std::nullopt;
}

ExperimentManifest ExperimentManifest::defaults(ExperimentKind kind) {
  ExperimentManifest m;
  m.kind = kind;
  m.methods = kDefaultMethods;
  m.confidences = {0.99, 0.999, 0.9999, 0.99999};
  switch (kind) {
    case ExperimentKind::kBorderSweep:
      for (int i = 1; i <= 10; ++i) m.probabilities.push_back(i / 1000.0);
      break;
    case ExperimentKind::kProbabilitySweep:
      m.probabilities = {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
      m.confidences = {0.99999};
      break;
    case ExperimentKind::kTableRows:
      m.confidences = {0.99, 0.99999};
      break;
    case ExperimentKind::kConvergence:
      m.model = "good";
      m.model_param = 0.5;
      break;
    case ExperimentKind::kDiscrepancy:
      break;
  }
  return m;
}

void ExperimentManifest::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "experiment") {
    const auto k = parse_experiment(value);
    if (!k) throw std::invalid_argument("manifest: unknown experiment '" + std::string(value) + "'");
    kind = *k;
  } else if (key == "probabilities") {
    probabilities = to_doubles(key, value);
  } else if (key == "confidences" || key == "confidence") {
    confidences = to_doubles(key, value);
  } else if (key == "half_width") {
    half_width = to_double(key, value);
  } else if (key == "methods" || key == "method") {
    methods.clear();
    for (auto item : split_list(value)) {
      const auto mm = parse_method(item);
      if (!mm) throw std::invalid_argument("manifest: unknown method '" + std::string(item) + "'");
      methods.push_back(*mm);
    }
  } else if (key == "sampler") {
    if (value == "default") {
      sampler.reset();
    } else {
      const auto s = parse_sampler(value);
      if (!s) throw std::invalid_argument("manifest: unknown sampler '" + std::string(value) + "'");
      if (*s == SamplerKind::kQint) {
        throw std::invalid_argument("manifest: sampler override must be mc or rqmc (qint runs only with method qint)");
      }
      sampler = *s;
    }
  } else if (key == "runs") {
    runs = to_uint(key, value);
  } else if (key == "seed") {
    seed = to_uint(key, value);
  } else if (key == "out_dir") {
    out_dir = std::string(value);
  } else if (key == "clt_floor") {
    const auto f = parse_clt_floor(value);
    if (!f) throw std::invalid_argument("manifest: unknown clt_floor '" + std::string(value) + "'");
    clt_floor = *f;
  } else if (key == "prior") {
    if (value == "jeffreys") {
      prior = BetaParams::jeffreys();
    } else if (value == "uniform") {
      prior = BetaParams::uniform();
    } else {
      const auto ab = to_doubles(key, value);
      if (ab.size() != 2) throw std::invalid_argument("manifest: prior expects jeffreys, uniform or 'alpha, beta'");
      prior = {ab[0], ab[1]};
    }
  } else if (key == "max_samples") {
    max_samples = to_uint(key, value);
  } else if (key == "model") {
    model = std::string(value);
  } else if (key == "model_param") {
    model_param = to_double(key, value);
  } else if (key == "n_max") {
    n_max = to_uint(key, value);
  } else if (key == "points_per_decade") {
    points_per_decade = to_uint(key, value);
  } else if (key == "mc_seeds") {
    mc_seeds = to_uint(key, value);
  } else if (key == "points") {
    points = to_uint(key, value);
  } else if (key == "prng_sets") {
    prng_sets = to_uint(key, value);
  } else {
    throw std::invalid_argument("manifest: unknown key '" + std::string(key) + "'");
  }
}

ExperimentManifest ExperimentManifest::parse(std::istream& in, ExperimentKind fallback) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::optional<ExperimentKind> kind;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v(line);
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("manifest line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key(trim(v.substr(0, eq)));
    std::string value(trim(v.substr(eq + 1)));
    // Tolerate TOML quoting and brackets.
    std::erase(value, '"');
    std::erase(value, '[');
    std::erase(value, ']');
    if (key == "experiment") {
      kind = parse_experiment(value);
      if (!kind) throw std::invalid_argument("manifest: unknown experiment '" + value + "'");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  ExperimentManifest m = defaults(kind.value_or(fallback));
  for (const auto& [k, v] : entries) m.set(k, v);
  m.validate();
  return m;
}

ExperimentManifest ExperimentManifest::load(const std::filesystem::path& path, ExperimentKind fallback) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path.string());
  return parse(in, fallback);
}

void ExperimentManifest::validate() const {
  const bool sweep = kind == ExperimentKind::kBorderSweep || kind == ExperimentKind::kProbabilitySweep ||
                     kind == ExperimentKind::kTableRows;
  if (sweep) {
    if (methods.empty()) throw std::invalid_argument("manifest: methods list is empty");
    if (confidences.empty()) throw std::invalid_argument("manifest: confidences list is empty");
    for (double c : confidences) {
      if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("manifest: confidence outside (0,1)");
    }
    if (!(half_width > 0.0)) throw std::invalid_argument("manifest: half_width must be positive");
    if (runs == 0) throw std::invalid_argument("manifest: runs must be >= 1");
    if (max_samples == 0) throw std::invalid_argument("manifest: max_samples must be >= 1");
    if (sampler == SamplerKind::kQint) {
      throw std::invalid_argument("manifest: sampler override must be mc or rqmc (Qint always uses its own)");
    }
    if (!(prior.alpha > 0.0 && prior.beta > 0.0)) throw std::invalid_argument("manifest: prior must be positive");
  }
  if (kind == ExperimentKind::kBorderSweep) {
    if (probabilities.empty()) throw std::invalid_argument("manifest: probabilities list is empty");
    for (double p : probabilities) {
      if (!(p > 0.0 && p <= 0.05)) throw std::invalid_argument("manifest: border-sweep probabilities must lie in (0, 0.05]");
    }
  }
  if (kind == ExperimentKind::kProbabilitySweep) {
    if (probabilities.empty()) throw std::invalid_argument("manifest: probabilities list is empty");
    for (double p : probabilities) {
      if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("manifest: prob-sweep probabilities must lie in (0,1)");
    }
  }
  if (kind == ExperimentKind::kConvergence) {
    if (model != "good" && model != "bad" && model != "bernoulli" && model != "identity" && model != "constant") {
      throw std::invalid_argument("manifest: unknown model '" + model + "'");
    }
    if (!(model_param >= 0.0 && model_param <= 1.0)) throw std::invalid_argument("manifest: model_param outside [0,1]");
    if (n_max < 2) throw std::invalid_argument("manifest: n_max must be >= 2");
    if (points_per_decade == 0) throw std::invalid_argument("manifest: points_per_decade must be >= 1");
    if (mc_seeds == 0) throw std::invalid_argument("manifest: mc_seeds must be >= 1");
  }
  if (kind == ExperimentKind::kDiscrepancy) {
    if (points == 0 || points > kStarDiscrepancyMaxPoints) {
      throw std::invalid_argument("manifest: points must lie in [1, " + std::to_string(kStarDiscrepancyMaxPoints) + "]");
    }
    if (prng_sets == 0) throw std::invalid_argument("manifest: prng_sets must be >= 1");
  }
}

std::string ExperimentManifest::serialize() const {
  std::ostringstream os;
  os << "experiment = " << experiment_tag(kind) << '\n';
  os << "seed = " << seed << '\n';
  os << "out_dir = " << out_dir.string() << '\n';
  switch (kind) {
    case ExperimentKind::kConvergence:
      os << "model = " << model << '\n';
      os << "model_param = " << fmt(model_param) << '\n';
      os << "n_max = " << n_max << '\n';
      os << "points_per_decade = " << points_per_decade << '\n';
      os << "mc_seeds = " << mc_seeds << '\n';
      break;
    case ExperimentKind::kDiscrepancy:
      os << "points = " << points << '\n';
      os << "prng_sets = " << prng_sets << '\n';
      break;
    default:
      if (kind != ExperimentKind::kTableRows) os << "probabilities = " << join(probabilities, fmt) << '\n';
      os << "confidences = " << join(confidences, fmt) << '\n';
      os << "half_width = " << fmt(half_width) << '\n';
      os << "methods = " << join(methods, [](IntervalMethod mm) { return std::string(method_tag(mm)); }) << '\n';
      os << "sampler = " << (sampler ? std::string(sampler_tag(*sampler)) : std::string("default")) << '\n';
      os << "runs = " << runs << '\n';
      os << "clt_floor = " << clt_floor_tag(clt_floor) << '\n';
      os << "prior = " << fmt(prior.alpha) << ", " << fmt(prior.beta) << '\n';
      os << "max_samples = " << max_samples << '\n';
      break;
  }
  return os.str();
}

}  // namespace probci
