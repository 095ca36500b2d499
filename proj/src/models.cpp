#include "probci/models.hpp"

#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstring>
#include <stdexcept>

#include <sys/wait.h>
#include <unistd.h>

namespace probci {

std::string_view verdict_tag(Verdict v) {
  switch (v) {
    case Verdict::kSat: return "SAT";
    case Verdict::kUnsat: return "UNSAT";
    case Verdict::kUndet: return "UNDET";
  }
  return "UNDET";
}

std::optional<Verdict> parse_verdict(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return std::nullopt;
  line = line.substr(first, line.find_last_not_of(" \t\r\n") - first + 1);
  if (line == "SAT") return Verdict::kSat;
  if (line == "UNSAT") return Verdict::kUnsat;
  if (line == "UNDET") return Verdict::kUndet;
  return std::nullopt;
}

Integrand BernoulliOracle::integrand() const {
  const double p_ = p;
  return {[p_](std::span<const double> u) { return u[0] < p_ ? 1.0 : 0.0; }, dimension, std::pair{0.0, 1.0}};
}

std::string_view model_tag(ModelKind k) { return k == ModelKind::kGood ? "good" : "bad"; }

std::optional<ModelKind> parse_model(std::string_view tag) {
  if (tag == "good") return ModelKind::kGood;
  if (tag == "bad") return ModelKind::kBad;
  return std::nullopt;
}

double good_bad_probability(ModelKind kind, double n_param) {
  if (!(n_param >= 0.0 && n_param <= 1.0)) throw std::invalid_argument("model parameter must lie in [0,1]");
  if (kind == ModelKind::kGood) return 0.1;
  const double t = 2.0 * n_param - 1.0;
  return t * t;
}

bool good_bad_indicator(ModelKind kind, double n_param, std::span<const double> u) {
  const double r = u[0];
  if (kind == ModelKind::kGood) return 0.9 * n_param <= r && r <= 0.9 * n_param + 0.1;
  return r < good_bad_probability(kind, n_param);
}

Integrand good_bad_integrand(ModelKind kind, double n_param) {
  good_bad_probability(kind, n_param);  // validates n_param
  return {[kind, n_param](std::span<const double> u) { return good_bad_indicator(kind, n_param, u) ? 1.0 : 0.0; },
          1, std::pair{0.0, 1.0}};
}

double bad_parameter_for_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0,1]");
  return 0.5 * (1.0 - std::sqrt(p));
}

Verdict banded_verdict(const BandedPredicate& pred, std::span<const double> u) {
  if (!(pred.delta >= 0.0)) throw std::invalid_argument("band width must be non-negative");
  const double r = u[0];
  const double d = pred.delta;
  if (pred.kind == ModelKind::kGood) {
    const double lo = 0.9 * pred.n_param;
    const double hi = lo + 0.1;
    if (lo + d <= r && r <= hi - d) return Verdict::kSat;
    if (r < lo - d || r > hi + d) return Verdict::kUnsat;
    return Verdict::kUndet;
  }
  const double p = good_bad_probability(pred.kind, pred.n_param);
  if (r < p - d) return Verdict::kSat;
  if (r >= p + d) return Verdict::kUnsat;
  return Verdict::kUndet;
}

double banded_undet_measure(const BandedPredicate& pred) {
  // Measure of [a, b] intersected with [0, 1].
  auto span01 = [](double a, double b) { return std::max(0.0, std::min(b, 1.0) - std::max(a, 0.0)); };
  const double d = pred.delta;
  if (pred.kind == ModelKind::kGood) {
    const double lo = 0.9 * pred.n_param;
    const double hi = lo + 0.1;
    if (2.0 * d >= hi - lo) return span01(lo - d, hi + d);
    return span01(lo - d, lo + d) + span01(hi - d, hi + d);
  }
  const double p = good_bad_probability(pred.kind, pred.n_param);
  return span01(p - d, p + d);
}

ExternalOracle::ExternalOracle(std::vector<std::string> argv) {
  if (argv.empty()) throw std::invalid_argument("external oracle needs a command");
  int in_pipe[2];   // parent -> child
  int out_pipe[2];  // child -> parent
  if (pipe(in_pipe) != 0) throw std::runtime_error("pipe failed");
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw std::runtime_error("pipe failed");
  }
  std::vector<char*> args;
  for (auto& a : argv) args.push_back(a.data());
  args.push_back(nullptr);

  pid_ = fork();
  if (pid_ < 0) throw std::runtime_error("fork failed");
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execvp(args[0], args.data());
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = fdopen(in_pipe[1], "w");
  from_child_ = fdopen(out_pipe[0], "r");
  if (!to_child_ || !from_child_) throw std::runtime_error("fdopen failed");
  // A dead child must surface as an error, not SIGPIPE.
  std::signal(SIGPIPE, SIG_IGN);
}

ExternalOracle::~ExternalOracle() {
  if (to_child_) {
    std::fputs("QUIT\n", to_child_);
    std::fclose(to_child_);
  }
  if (from_child_) std::fclose(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

Verdict ExternalOracle::evaluate(std::span<const double> point) {
  std::string req = "EVAL";
  char buf[40];
  for (double x : point) {
    std::snprintf(buf, sizeof buf, " %.17g", x);
    req += buf;
  }
  req += '\n';
  if (std::fputs(req.c_str(), to_child_) < 0 || std::fflush(to_child_) != 0) {
    throw std::runtime_error("external oracle: write failed");
  }
  char line[256];
  if (!std::fgets(line, sizeof line, from_child_)) throw std::runtime_error("external oracle: no response");
  const auto v = parse_verdict(line);
  if (!v) throw std::runtime_error(std::string("external oracle: bad response '") + line + "'");
  return *v;
}

}  // namespace probci
