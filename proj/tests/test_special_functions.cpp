#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "probci/special_functions.hpp"

using namespace probci;

TEST_CASE("normal quantile reference points") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(std::fabs(normal_quantile(0.975) - 1.959963984540054) < 1e-9);
  CHECK(std::fabs(normal_quantile(0.999995) - 4.417173413467605) < 1e-9);
  CHECK(std::fabs(normal_quantile(0.995) - 2.5758293035489004) < 1e-9);
  CHECK(std::fabs(normal_quantile(1e-300) + 37.0470962993612) < 1e-9);
  CHECK(std::fabs(critical_value(0.95) - 1.959963984540054) < 1e-9);
}

TEST_CASE("normal quantile inverts the cdf and is odd") {
  for (double p = 1e-12; p < 1.0; p = p < 0.01 ? p * 3.0 : p + 0.0137) {
    const double x = normal_quantile(p);
    const double upper = 1.0 - p;  // rounded; reflect it back exactly
    CHECK(std::fabs(normal_quantile(upper) + normal_quantile(1.0 - upper)) < 1e-9);
    CHECK(std::fabs(normal_cdf(x) - p) <= 1e-12 * std::max(1.0, p / (1.0 - p)) + 1e-15);
  }
}

TEST_CASE("normal quantile domain") {
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(std::nan("")), std::domain_error);
}

TEST_CASE("incomplete beta closed forms") {
  CHECK(regularized_incomplete_beta(0.3, 1, 1) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(regularized_incomplete_beta(0.7, 4, 1) == doctest::Approx(std::pow(0.7, 4)).epsilon(1e-13));
  CHECK(regularized_incomplete_beta(0.2, 1, 5) == doctest::Approx(1 - std::pow(0.8, 5)).epsilon(1e-13));
  CHECK(regularized_incomplete_beta(0.0, 2, 3) == 0.0);
  CHECK(regularized_incomplete_beta(1.0, 2, 3) == 1.0);
  // I_{1/2}(a, a) = 1/2
  CHECK(regularized_incomplete_beta(0.5, 37.5, 37.5) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("beta inverse closed forms") {
  CHECK(beta_inv_cdf(0.5, 1, 1) == doctest::Approx(0.5).epsilon(1e-12));
  for (double q : {0.001, 0.025, 0.3, 0.9, 0.999}) {
    for (double n : {1.0, 2.0, 10.0, 150.0}) {
      CHECK(std::fabs(beta_inv_cdf(q, n, 1) - std::pow(q, 1.0 / n)) < 1e-10);
    }
  }
  CHECK(std::fabs(beta_inv_cdf(0.025, 10, 1) - 0.69150289218123) < 1e-10);
}

namespace {

// |F(x) - q| <= 1e-10, or q is bracketed by F at the neighbouring doubles
// (x cannot be resolved further).
bool resolved(double x, double q, double (*cdf)(double, double, double), double a, double b) {
  if (std::fabs(cdf(x, a, b) - q) <= 1e-10) return true;
  const double f0 = cdf(std::nextafter(x, 0.0), a, b);
  const double f1 = cdf(std::nextafter(x, 1.0), a, b);
  return std::min(f0, f1) <= q && q <= std::max(f0, f1);
}

double upper_tail(double x, double a, double b) { return 1.0 - regularized_incomplete_beta(x, a, b); }

}  // namespace

TEST_CASE("beta inverse round trip in cdf space") {
  for (double a : {0.5, 1.0, 3.5, 40.0, 2000.5}) {
    for (double b : {0.5, 2.0, 99.5, 1e5}) {
      for (double q : {1e-9, 5e-6, 0.025, 0.5, 0.975, 0.999995}) {
        const double x = beta_inv_cdf(q, a, b);
        CHECK_MESSAGE(resolved(x, q, regularized_incomplete_beta, a, b), a << ' ' << b << ' ' << q);
        const double y = beta_inv_ccdf(q, a, b);
        CHECK_MESSAGE(resolved(y, q, upper_tail, a, b), a << ' ' << b << ' ' << q);
      }
    }
  }
}
