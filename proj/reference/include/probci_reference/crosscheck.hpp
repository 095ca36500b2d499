// Grid comparison of the library's interval methods against the oracle.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace probci::reference {

struct CrosscheckResult {
  std::uint64_t comparisons = 0;
  std::uint64_t failures = 0;
  long double worst = 0.0L;
  std::string worst_case;  // human-readable description of the worst deviation
  bool ok() const { return failures == 0; }
};

inline const std::vector<double>& crosscheck_confidences() {
  static const std::vector<double> c{0.9, 0.95, 0.99, 0.999, 0.9999, 0.99999};
  return c;
}

/// Every closed-form method for n in [1, max_n], all success counts and the
/// given confidences; both endpoints must agree within tol.
CrosscheckResult crosscheck_intervals(std::uint64_t max_n = 200, double tol = 1e-6,
                                      const std::vector<double>& confidences = crosscheck_confidences());

}  // namespace probci::reference
