#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "probci/sequences.hpp"

using namespace probci;

TEST_CASE("unit point rejects coordinates outside [0,1)") {
  CHECK_THROWS_AS(UnitPoint({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(UnitPoint({-0.1, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(UnitPoint(std::vector<double>{}), std::invalid_argument);
  CHECK(UnitPoint({0.0, 0.999}).dimension() == 2);
}

TEST_CASE("sobol first coordinates in gray-code order") {
  SobolGenerator gen(2);
  const double want0[] = {0.5, 0.75, 0.25, 0.375};
  const double want1[] = {0.5, 0.25, 0.75, 0.375};
  for (int i = 0; i < 4; ++i) {
    const UnitPoint p = gen.next();
    CHECK(p[0] == want0[i]);
    CHECK(p[1] == want1[i]);
  }
  CHECK(gen.index() == 5);
}

TEST_CASE("sobol origin is opt-in") {
  SobolGenerator gen(3, SobolOptions{true});
  const UnitPoint p = gen.next();
  CHECK(p == UnitPoint({0.0, 0.0, 0.0}));
  CHECK(gen.next()[0] == 0.5);
}

TEST_CASE("sobol dimension bounds") {
  CHECK_THROWS_AS(SobolGenerator(0), std::invalid_argument);
  CHECK_THROWS_AS(SobolGenerator(22), std::invalid_argument);
  SobolGenerator ok(21);
  CHECK(ok.next().dimension() == 21);
}

TEST_CASE("sobol projection property: first 2^m coordinates form a dyadic grid") {
  for (std::size_t d = 1; d <= 16; ++d) {
    SobolGenerator gen(d, SobolOptions{true});
    for (int m = 0; m <= 10; ++m) {
      const std::size_t n = std::size_t{1} << m;
      for (std::size_t coord = 0; coord < d; ++coord) {
        std::vector<double> v(n);
        std::vector<double> buf(d);
        for (std::size_t i = 0; i < n; ++i) {
          gen.point_at(i, buf);
          v[i] = buf[coord] * static_cast<double>(n);
        }
        std::sort(v.begin(), v.end());
        bool perm = true;
        for (std::size_t i = 0; i < n; ++i) perm = perm && v[i] == static_cast<double>(i);
        CHECK_MESSAGE(perm, "dimension " << d << " coordinate " << coord << " m " << m);
      }
    }
  }
}

TEST_CASE("sobol random access matches sequential generation") {
  SobolGenerator seq(5);
  const SobolGenerator ra(5);
  std::vector<double> a(5), b(5);
  for (std::uint64_t i = 1; i <= 3000; ++i) {
    seq.next(a);
    ra.point_at(i, b);
    REQUIRE(a == b);
  }
}

TEST_CASE("sobol replays after reset and honours a digital shift") {
  SobolGenerator gen(2);
  const auto first = gen.next();
  gen.next();
  gen.reset();
  CHECK(gen.next() == first);
  gen.set_digital_shift({0x80000000u, 0u});
  gen.reset();
  CHECK(gen.next()[0] == 0.0);
  CHECK_THROWS_AS(gen.set_digital_shift({1u}), std::invalid_argument);
}

TEST_CASE("sobol overflow is reported") {
  const SobolGenerator gen(1);
  CHECK_THROWS_AS(gen.point_at(SobolGenerator::kMaxPoints), std::overflow_error);
}

TEST_CASE("direction table text format") {
  std::istringstream good("d s a m_i\n2 1 0 1\n3 2 1 1 3\n");
  const auto table = DirectionTable::parse(good);
  CHECK(table.max_dimension() == 3);
  SobolGenerator gen(3, {}, table);
  CHECK(gen.next() == UnitPoint({0.5, 0.5, 0.5}));

  std::istringstream even("2 1 0 2\n");
  CHECK_THROWS_AS(DirectionTable::parse(even), std::runtime_error);
  std::istringstream gap("3 2 1 1 3\n");
  CHECK_THROWS_AS(DirectionTable::parse(gap), std::runtime_error);
  std::istringstream truncated("2 2 1 1\n");
  CHECK_THROWS_AS(DirectionTable::parse(truncated), std::runtime_error);
  CHECK_THROWS(DirectionTable::load("/nonexistent/table.txt"));
}

TEST_CASE("pseudorandom replay and distinct streams") {
  PseudoRandomGenerator a(7), b(7), c(8);
  bool all_same = true;
  for (int i = 0; i < 100; ++i) {
    const auto pa = a.next(3);
    all_same = all_same && pa == b.next(3);
  }
  CHECK(all_same);
  PseudoRandomGenerator a2(7);
  CHECK(a2.uniform() != c.uniform());
}

TEST_CASE("pseudorandom mean of 1e5 draws") {
  PseudoRandomGenerator g(11);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = g.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::fabs(sum / 1e5 - 0.5) < 0.01);
}

TEST_CASE("derived seeds differ by path") {
  static_assert(derive_seed(1, {0}) != derive_seed(1, {1}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) == derive_seed(1, {2}));
}

TEST_CASE("random shift") {
  const std::vector<UnitPoint> pts{UnitPoint({0.7})};
  CHECK(randomize_shift(pts, UnitPoint({0.5}))[0][0] == doctest::Approx(0.2).epsilon(1e-15));

  PseudoRandomGenerator g(3);
  std::vector<UnitPoint> cloud;
  for (int i = 0; i < 200; ++i) cloud.push_back(g.next(2));
  CHECK(randomize_shift(cloud, UnitPoint({0.0, 0.0})) == cloud);

  const UnitPoint eps({0.3, 0.81});
  const UnitPoint back({1.0 - 0.3, 1.0 - 0.81});
  const auto moved = randomize_shift(cloud, eps);
  const auto restored = randomize_shift(moved, back);
  REQUIRE(moved.size() == cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t d = 0; d < 2; ++d) {
      const double diff = std::fabs(restored[i][d] - cloud[i][d]);
      CHECK(std::min(diff, 1.0 - diff) < 1e-12);
    }
  }
  CHECK_THROWS_AS(randomize_shift(cloud, UnitPoint({0.1})), std::invalid_argument);
}

TEST_CASE("star discrepancy small cases") {
  const std::vector<UnitPoint> centre{UnitPoint({0.5, 0.5})};
  CHECK(star_discrepancy_2d(centre) == 0.75);
  CHECK(star_discrepancy_2d_serial(centre) == 0.75);
  const std::vector<UnitPoint> corner{UnitPoint({0.0, 0.0})};
  CHECK(star_discrepancy_2d(corner) == 1.0);
  CHECK_THROWS_AS(star_discrepancy_2d(std::vector<UnitPoint>{}), std::invalid_argument);
  CHECK_THROWS_AS(star_discrepancy_2d(std::vector<UnitPoint>{UnitPoint({0.1})}), std::invalid_argument);
  std::vector<UnitPoint> many(kStarDiscrepancyMaxPoints + 1, UnitPoint({0.1, 0.1}));
  CHECK_THROWS_AS(star_discrepancy_2d(many), std::invalid_argument);
}

TEST_CASE("star discrepancy of sobol shrinks from 16 to 256 points") {
  SobolGenerator gen(2);
  std::vector<UnitPoint> pts;
  for (int i = 0; i < 256; ++i) pts.push_back(gen.next());
  const double d16 = star_discrepancy_2d(std::span(pts).first(16));
  const double d256 = star_discrepancy_2d(pts);
  CHECK(d256 < d16);
}

TEST_CASE("star discrepancy dominates a random box scan") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    PseudoRandomGenerator g(seed);
    std::vector<UnitPoint> pts;
    for (int i = 0; i < 60; ++i) pts.push_back(g.next(2));
    const double exact = star_discrepancy_2d(pts);
    CHECK(exact == star_discrepancy_2d_serial(pts));
    PseudoRandomGenerator boxes(seed + 100);
    double scan = 0.0;
    for (int b = 0; b < 10000; ++b) {
      const double c1 = boxes.uniform();
      const double c2 = boxes.uniform();
      std::size_t count = 0;
      for (const auto& p : pts) count += (p[0] < c1 && p[1] < c2) ? 1 : 0;
      scan = std::max(scan, std::fabs(static_cast<double>(count) / 60.0 - c1 * c2));
    }
    CHECK(scan <= exact + 1e-12);
  }
}
