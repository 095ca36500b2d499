#include "probci/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "probci/special_functions.hpp"

namespace probci {

namespace {

bool as_bit(double v) {
  if (v == 1.0) return true;
  if (v == 0.0) return false;
  throw std::domain_error("sequential estimation needs a 0/1 integrand, got " + std::to_string(v));
}

bool due(const StoppingRule& rule, std::uint64_t n, std::uint64_t last_check) {
  if (n < rule.min_samples) return false;
  return n <= rule.dense_until || n - last_check >= rule.batch || n >= rule.max_samples;
}

void record(SequentialReport& rep, const ConfidenceInterval& ci, std::uint64_t successes) {
  rep.trajectory.push_back({ci.n_used, successes, ci.lo, ci.hi, ci.half_width});
}

ConfidenceInterval replicate_means_interval(const std::vector<std::uint64_t>& rep_successes, std::uint64_t per_rep,
                                            const BernoulliSummary& pooled, const SequentialTask& task) {
  const double r = static_cast<double>(rep_successes.size());
  double mean = 0.0;
  for (auto s : rep_successes) mean += static_cast<double>(s) / static_cast<double>(per_rep);
  mean /= r;
  double ss = 0.0;
  for (auto s : rep_successes) {
    const double d = static_cast<double>(s) / static_cast<double>(per_rep) - mean;
    ss += d * d;
  }
  // Identical replicate counts carry no spread information (the rounding in
  // `mean` would otherwise leave a spurious tiny ss); use the pooled sample.
  if (std::adjacent_find(rep_successes.begin(), rep_successes.end(), std::not_equal_to<>()) == rep_successes.end()) {
    return clt_interval(pooled, task.rule.confidence, task.interval.clt_floor);
  }
  const double h = critical_value(task.rule.confidence) * std::sqrt(ss / (r - 1.0) / r);
  ConfidenceInterval ci;
  ci.lo = std::max(0.0, mean - h);
  ci.hi = std::min(1.0, mean + h);
  ci.confidence = task.rule.confidence;
  ci.method = IntervalMethod::kClt;
  ci.n_used = pooled.n;
  ci.half_width = h;
  return ci;
}

SequentialReport run_stream(const SequentialTask& task, std::uint64_t seed) {
  const bool rep_means = task.sampler == SamplerKind::kRqmc && task.rqmc_mode == RqmcMode::kReplicateMeans;
  if (rep_means && task.method != IntervalMethod::kClt) {
    throw std::invalid_argument("replicate-means RQMC is only supported for the CLT method");
  }
  if (rep_means && task.replicates < 2) throw std::invalid_argument("replicate-means RQMC needs r >= 2");
  SampleStream stream(task.sampler, task.f.dimension, task.replicates, seed);
  SequentialReport rep;
  rep.method = task.method;
  rep.sampler = task.sampler;
  rep.seed = seed;

  BernoulliSummary sum;
  std::vector<std::uint64_t> rep_successes(stream.width(), 0);
  std::uint64_t steps = 0;
  std::uint64_t last_check = 0;
  std::vector<double> pts;
  const std::size_t d = task.f.dimension;
  while (true) {
    stream.step(pts);
    ++steps;
    for (std::size_t j = 0; j < stream.width(); ++j) {
      const bool hit = as_bit(task.f(std::span<const double>(pts.data() + j * d, d)));
      sum.add(hit);
      rep_successes[j] += hit ? 1 : 0;
    }
    if (!due(task.rule, sum.n, last_check)) continue;
    last_check = sum.n;
    rep.interval = rep_means ? replicate_means_interval(rep_successes, steps, sum, task)
                             : compute_interval(task.method, sum, task.rule.confidence, task.interval);
    if (task.record_trajectory) record(rep, rep.interval, sum.successes);
    if (rep.interval.half_width <= task.rule.half_width) {
      rep.converged = true;
      break;
    }
    if (sum.n >= task.rule.max_samples) break;
  }
  rep.n_used = sum.n;
  rep.successes = sum.successes;
  return rep;
}

SequentialReport run_qint(const SequentialTask& task, std::uint64_t seed) {
  const std::size_t d = task.f.dimension;
  SobolGenerator gen(d);
  PseudoRandomGenerator prng(seed);
  std::vector<std::uint32_t> shift(d);
  for (auto& s : shift) s = static_cast<std::uint32_t>(prng.bits() >> 32);
  gen.set_digital_shift(shift);

  SequentialReport rep;
  rep.method = IntervalMethod::kQint;
  rep.sampler = SamplerKind::kQint;
  rep.seed = seed;

  // Values cached by Sobol index so growing s only evaluates new points.
  std::vector<double> values;
  for (unsigned s = 0;; ++s) {
    const std::uint64_t n = static_cast<std::uint64_t>(task.qint_k) << s;
    if (n > task.rule.max_samples || s >= 31) break;
    QintPartition part = qint_partition(gen, task.qint_k, s);
    for (std::size_t i = values.size(); i < n; ++i) values.push_back(as_bit(task.f(part.point(i))) ? 1.0 : 0.0);
    rep.qint_schedule.push_back(n);
    rep.interval = qint_interval(values, part, task.rule.confidence, task.qint);
    std::uint64_t successes = 0;
    for (double v : values) successes += v > 0.5 ? 1 : 0;
    rep.n_used = n;
    rep.successes = successes;
    if (task.record_trajectory) record(rep, rep.interval, successes);
    if (n >= task.rule.min_samples && rep.interval.half_width <= task.rule.half_width) {
      rep.converged = true;
      break;
    }
  }
  return rep;
}

AveragedReport aggregate(std::vector<SequentialReport> runs) {
  AveragedReport out;
  for (const auto& r : runs) {
    out.mean_lo += r.interval.lo;
    out.mean_hi += r.interval.hi;
    out.mean_n_used += static_cast<double>(r.n_used);
    out.all_converged = out.all_converged && r.converged;
  }
  const double k = static_cast<double>(runs.size());
  out.mean_lo /= k;
  out.mean_hi /= k;
  out.mean_n_used /= k;
  out.runs = std::move(runs);
  return out;
}

void check_task(const SequentialTask& task, std::size_t runs) {
  task.rule.validate();
  if (!task.f.f || task.f.dimension == 0) throw std::invalid_argument("sequential task has no integrand");
  if (runs == 0) throw std::invalid_argument("averaged_runs needs runs >= 1");
}

}  // namespace

void StoppingRule::validate() const {
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0,1)");
  if (!(half_width > 0.0)) throw std::invalid_argument("half_width must be positive");
  if (max_samples == 0) throw std::invalid_argument("max_samples must be positive");
  if (batch == 0) throw std::invalid_argument("batch must be positive");
}

std::string_view sampler_tag(SamplerKind s) {
  switch (s) {
    case SamplerKind::kMc: return "mc";
    case SamplerKind::kRqmc: return "rqmc";
    case SamplerKind::kQint: return "qint";
  }
  return "unknown";
}

std::optional<SamplerKind> parse_sampler(std::string_view tag) {
  if (tag == "mc") return SamplerKind::kMc;
  if (tag == "rqmc") return SamplerKind::kRqmc;
  if (tag == "qint") return SamplerKind::kQint;
  return std::nullopt;
}

SamplerKind default_sampler(IntervalMethod m) {
  switch (m) {
    case IntervalMethod::kBayesian:
    case IntervalMethod::kClopperPearson: return SamplerKind::kMc;
    case IntervalMethod::kQint: return SamplerKind::kQint;
    default: return SamplerKind::kRqmc;
  }
}

SampleStream::SampleStream(SamplerKind kind, std::size_t dimension, std::size_t replicates, std::uint64_t seed)
    : kind_(kind), dimension_(dimension), width_(1), prng_(seed), sobol_(dimension) {
  if (kind == SamplerKind::kQint) throw std::invalid_argument("the Qint sampler has no point stream");
  if (kind == SamplerKind::kRqmc) {
    if (replicates < 1) throw std::invalid_argument("RQMC needs at least one replicate");
    width_ = replicates;
    shifts_.assign(replicates, std::vector<double>(dimension));
    for (auto& s : shifts_) prng_.fill(s);
    base_.resize(dimension);
  }
}

void SampleStream::step(std::vector<double>& out) {
  out.resize(width_ * dimension_);
  if (kind_ == SamplerKind::kMc) {
    prng_.fill(out);
    return;
  }
  sobol_.next(base_);
  for (std::size_t j = 0; j < width_; ++j) {
    std::span<double> x(out.data() + j * dimension_, dimension_);
    std::copy(base_.begin(), base_.end(), x.begin());
    shift_in_place(x, shifts_[j]);
  }
}

SequentialReport sequential_estimate(const SequentialTask& task, std::uint64_t seed) {
  check_task(task, 1);
  if (task.method == IntervalMethod::kQint || task.sampler == SamplerKind::kQint) {
    if (task.method != IntervalMethod::kQint || task.sampler != SamplerKind::kQint) {
      throw std::invalid_argument("the Qint method and the Qint sampler go together");
    }
    return run_qint(task, seed);
  }
  return run_stream(task, seed);
}

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run) { return derive_seed(master_seed, {run}); }

AveragedReport averaged_runs_serial(const SequentialTask& task, std::uint64_t master_seed, std::size_t runs) {
  check_task(task, runs);
  std::vector<SequentialReport> out(runs);
  for (std::size_t i = 0; i < runs; ++i) out[i] = sequential_estimate(task, run_seed(master_seed, i));
  return aggregate(std::move(out));
}

AveragedReport averaged_runs(const SequentialTask& task, std::uint64_t master_seed, std::size_t runs) {
  check_task(task, runs);
  std::vector<SequentialReport> out(runs);
  std::string error;
  const auto n = static_cast<std::ptrdiff_t>(runs);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = sequential_estimate(task, run_seed(master_seed, static_cast<std::size_t>(i)));
    } catch (const std::exception& e) {
#pragma omp critical(probci_run_error)
      if (error.empty()) error = e.what();
    }
  }
  if (!error.empty()) throw std::runtime_error(error);
  return aggregate(std::move(out));
}

ValidatedReport validated_estimate(const ThreeValuedOracle& oracle, std::size_t dimension, IntervalMethod method,
                                   const StoppingRule& rule, SamplerKind sampler, std::uint64_t seed,
                                   const IntervalOptions& opts, bool record_trajectory) {
  rule.validate();
  if (!oracle) throw std::invalid_argument("validated_estimate needs an oracle");
  if (sampler == SamplerKind::kQint || method == IntervalMethod::kQint) {
    throw std::invalid_argument("validated estimation supports the MC and RQMC samplers only");
  }
  SampleStream stream(sampler, dimension, kDefaultReplicates, seed);
  ValidatedReport out;
  for (auto* r : {&out.lower, &out.upper}) {
    r->method = method;
    r->sampler = sampler;
    r->seed = seed;
  }
  BernoulliSummary lo_sum;
  BernoulliSummary hi_sum;
  std::uint64_t last_check = 0;
  std::vector<double> pts;
  while (true) {
    stream.step(pts);
    for (std::size_t j = 0; j < stream.width(); ++j) {
      const Verdict v = oracle(std::span<const double>(pts.data() + j * dimension, dimension));
      lo_sum.add(x_sat(v) > 0.5);
      hi_sum.add(x_usat(v) > 0.5);
    }
    if (!due(rule, lo_sum.n, last_check)) continue;
    last_check = lo_sum.n;
    out.ordered = out.ordered && lo_sum.successes <= hi_sum.successes;
    out.lower.interval = compute_interval(method, lo_sum, rule.confidence, opts);
    out.upper.interval = compute_interval(method, hi_sum, rule.confidence, opts);
    if (record_trajectory) {
      out.trajectory.push_back({lo_sum.n, lo_sum.p_hat(), hi_sum.p_hat()});
      record(out.lower, out.lower.interval, lo_sum.successes);
      record(out.upper, out.upper.interval, hi_sum.successes);
    }
    const bool done = out.lower.interval.half_width <= rule.half_width &&
                      out.upper.interval.half_width <= rule.half_width;
    if (done || lo_sum.n >= rule.max_samples) {
      out.lower.converged = out.upper.converged = done;
      break;
    }
  }
  out.lower.n_used = lo_sum.n;
  out.lower.successes = lo_sum.successes;
  out.upper.n_used = hi_sum.n;
  out.upper.successes = hi_sum.successes;
  out.enclosure_lo = out.lower.interval.lo;
  out.enclosure_hi = out.upper.interval.hi;
  return out;
}

}  // namespace probci
