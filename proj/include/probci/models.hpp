// Benchmark Bernoulli sources: a plain threshold oracle, the analytic Good
// and Bad models, their three-valued banded variants, and a client for an
// external verdict process.
#pragma once

#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <sys/types.h>

#include "probci/estimators.hpp"

namespace probci {

enum class Verdict { kSat, kUnsat, kUndet };
std::string_view verdict_tag(Verdict v);

/// Lower indicator: 1 only for a decided Sat.
inline double x_sat(Verdict v) { return v == Verdict::kSat ? 1.0 : 0.0; }
/// Upper indicator: 0 only for a decided Unsat.
inline double x_usat(Verdict v) { return v == Verdict::kUnsat ? 0.0 : 1.0; }

/// 1 iff u_0 < p.
struct BernoulliOracle {
  double p = 0.0;
  std::size_t dimension = 1;

  bool sample(std::span<const double> u) const { return u[0] < p; }
  Integrand integrand() const;
};

enum class ModelKind { kGood, kBad };
std::string_view model_tag(ModelKind k);
std::optional<ModelKind> parse_model(std::string_view tag);

/// Good: 0.1 for every n. Bad: (2n - 1)^2.
double good_bad_probability(ModelKind kind, double n_param);
/// Good: 0.9n <= r <= 0.9n + 0.1. Bad: r < (2n - 1)^2. Here r = u_0.
bool good_bad_indicator(ModelKind kind, double n_param, std::span<const double> u);
Integrand good_bad_integrand(ModelKind kind, double n_param);
/// Parameter n in [0, 0.5] with (2n - 1)^2 = p.
double bad_parameter_for_probability(double p);

/// Goal set widened and shrunk by delta: Sat at least delta inside it,
/// Unsat more than delta outside it, Undet in between.
struct BandedPredicate {
  ModelKind kind = ModelKind::kGood;
  double n_param = 0.5;
  double delta = 0.0;
};

Verdict banded_verdict(const BandedPredicate& pred, std::span<const double> u);
/// Exact Lebesgue measure of the Undet region in r.
double banded_undet_measure(const BandedPredicate& pred);

/// Child process speaking the line protocol (v1):
///   request  "EVAL <p1> ... <pd>\n"
///   response "SAT" | "UNSAT" | "UNDET"
/// On destruction the client sends "QUIT\n", closes the pipes and reaps the
/// child. Not thread-safe: one request in flight at a time.
class ExternalOracle {
 public:
  static constexpr int kProtocolVersion = 1;

  explicit ExternalOracle(std::vector<std::string> argv);
  ~ExternalOracle();
  ExternalOracle(const ExternalOracle&) = delete;
  ExternalOracle& operator=(const ExternalOracle&) = delete;

  Verdict evaluate(std::span<const double> point);

 private:
  pid_t pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

/// Parses one protocol response line (surrounding whitespace ignored).
std::optional<Verdict> parse_verdict(std::string_view line);

}  // namespace probci
