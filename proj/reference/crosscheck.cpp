#include "probci_reference/crosscheck.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "probci/intervals.hpp"
#include "probci_reference/oracle.hpp"

namespace probci::reference {

namespace {

Method to_reference(IntervalMethod m) {
  switch (m) {
    case IntervalMethod::kClt: return Method::kClt;
    case IntervalMethod::kWilson: return Method::kWilson;
    case IntervalMethod::kAgrestiCoull: return Method::kAgrestiCoull;
    case IntervalMethod::kAgrestiCoullWilson: return Method::kAgrestiCoullWilson;
    case IntervalMethod::kLogit: return Method::kLogit;
    case IntervalMethod::kAnscombe: return Method::kAnscombe;
    case IntervalMethod::kArcsine: return Method::kArcsine;
    case IntervalMethod::kBayesian: return Method::kBayesian;
    case IntervalMethod::kClopperPearson: return Method::kClopperPearson;
    case IntervalMethod::kQint: break;
  }
  throw std::invalid_argument("no closed-form oracle for qint");
}

}  // namespace

CrosscheckResult crosscheck_intervals(std::uint64_t max_n, double tol, const std::vector<double>& confidences) {
  CrosscheckResult r;
  for (IntervalMethod m : closed_form_methods()) {
    const Method rm = to_reference(m);
    for (double c : confidences) {
      for (std::uint64_t n = 1; n <= max_n; ++n) {
        for (std::uint64_t s = 0; s <= n; ++s) {
          const ConfidenceInterval got = compute_interval(m, BernoulliSummary(n, s), c);
          const Interval want = interval(rm, n, s, static_cast<long double>(c));
          const long double err = std::max(std::fabs(static_cast<long double>(got.lo) - want.lo),
                                           std::fabs(static_cast<long double>(got.hi) - want.hi));
          ++r.comparisons;
          if (!(err <= tol)) ++r.failures;
          if (!(err <= r.worst)) {
            r.worst = err;
            std::ostringstream os;
            os << method_tag(m) << " n=" << n << " s=" << s << " c=" << c << " got=[" << got.lo << ", " << got.hi
               << "] want=[" << static_cast<double>(want.lo) << ", " << static_cast<double>(want.hi) << "]";
            r.worst_case = os.str();
          }
        }
      }
    }
  }
  return r;
}

}  // namespace probci::reference
