#include "probci/sequences.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>


namespace probci {

namespace {

void check_unit(double c) {
  if (!(c >= 0.0 && c < 1.0)) {
    throw std::invalid_argument("UnitPoint coordinate outside [0,1): " + std::to_string(c));
  }
}

// d s a m_1 .. m_s for Sobol dimensions 2..21.
constexpr const char* kJoeKuo21 = R"(d s a m_i
2 1 0 1
3 2 1 1 3
4 3 1 1 3 1
5 3 2 1 1 1
6 4 1 1 1 3 3
7 4 4 1 3 5 13
8 5 2 1 1 5 5 17
9 5 4 1 1 5 5 5
10 5 7 1 1 7 11 19
11 5 11 1 1 5 1 1
12 5 13 1 1 1 3 11
13 5 14 1 3 5 5 31
14 6 1 1 3 3 9 7 49
15 6 13 1 1 1 15 21 21
16 6 16 1 3 1 13 27 49
17 6 19 1 1 1 15 7 5
18 6 22 1 3 1 15 13 25
19 6 25 1 1 5 5 19 61
20 7 1 1 3 7 11 23 15 103
21 7 4 1 3 7 13 13 15 69
)";

}  // namespace

UnitPoint::UnitPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("UnitPoint needs at least one coordinate");
  for (double c : coords_) check_unit(c);
}

UnitPoint::UnitPoint(std::initializer_list<double> coords) : UnitPoint(std::vector<double>(coords)) {}

const DirectionTable& DirectionTable::builtin() {
  static const DirectionTable table = [] {
    std::istringstream in(kJoeKuo21);
    return parse(in);
  }();
  return table;
}

DirectionTable DirectionTable::parse(std::istream& in) {
  DirectionTable table;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first == "d") continue;  // header
    Row row;
    try {
      row.dimension = static_cast<unsigned>(std::stoul(first));
    } catch (const std::exception&) {
      throw std::runtime_error("direction table: bad dimension field '" + first + "'");
    }
    unsigned long a = 0;
    if (!(fields >> row.degree >> a)) throw std::runtime_error("direction table: truncated row: " + line);
    row.coefficients = static_cast<std::uint32_t>(a);
    if (row.degree == 0 || row.degree >= SobolGenerator::kBits) {
      throw std::runtime_error("direction table: bad degree in row: " + line);
    }
    for (unsigned i = 0; i < row.degree; ++i) {
      unsigned long m = 0;
      if (!(fields >> m)) throw std::runtime_error("direction table: missing m_i in row: " + line);
      // m_i must be odd and below 2^i.
      if (m % 2 == 0 || m >= (1UL << (i + 1))) {
        throw std::runtime_error("direction table: invalid m_" + std::to_string(i + 1) + " in row: " + line);
      }
      row.initial.push_back(static_cast<std::uint32_t>(m));
    }
    if (row.dimension != table.rows_.size() + 2) {
      throw std::runtime_error("direction table: rows must be consecutive from dimension 2");
    }
    table.rows_.push_back(std::move(row));
  }
  return table;
}

DirectionTable DirectionTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open direction table " + path.string());
  return parse(in);
}

SobolGenerator::SobolGenerator(std::size_t dimension, SobolOptions options, const DirectionTable& table)
    : dimension_(dimension), options_(options) {
  if (dimension == 0) throw std::invalid_argument("Sobol dimension must be >= 1");
  if (dimension > table.max_dimension()) {
    throw std::invalid_argument("Sobol dimension " + std::to_string(dimension) +
                                " exceeds direction table maximum " + std::to_string(table.max_dimension()));
  }
  directions_.resize(dimension);
  for (int i = 0; i < kBits; ++i) directions_[0][i] = std::uint32_t{1} << (kBits - 1 - i);
  for (std::size_t d = 1; d < dimension; ++d) {
    const DirectionTable::Row& row = table.rows()[d - 1];
    auto& v = directions_[d];
    const unsigned s = row.degree;
    for (unsigned i = 0; i < s; ++i) v[i] = row.initial[i] << (kBits - 1 - i);
    for (unsigned i = s; i < static_cast<unsigned>(kBits); ++i) {
      std::uint32_t x = v[i - s] ^ (v[i - s] >> s);
      for (unsigned k = 1; k < s; ++k) {
        if ((row.coefficients >> (s - 1 - k)) & 1U) x ^= v[i - k];
      }
      v[i] = x;
    }
  }
  shift_.assign(dimension, 0);
  reset();
}

void SobolGenerator::seek(std::uint64_t index) {
  index_ = index;
  state_.assign(dimension_, 0);
  if (index >= kMaxPoints) return;
  const std::uint64_t gray = index ^ (index >> 1);
  for (std::size_t d = 0; d < dimension_; ++d) {
    std::uint32_t x = 0;
    for (int b = 0; b < kBits; ++b) {
      if ((gray >> b) & 1U) x ^= directions_[d][b];
    }
    state_[d] = x;
  }
}

void SobolGenerator::reset() { seek(options_.include_origin ? 0 : 1); }

void SobolGenerator::set_digital_shift(std::vector<std::uint32_t> shift) {
  if (shift.size() != dimension_) throw std::invalid_argument("digital shift dimension mismatch");
  shift_ = std::move(shift);
}

void SobolGenerator::next(std::span<double> out) {
  if (out.size() != dimension_) throw std::invalid_argument("Sobol output span has wrong dimension");
  if (index_ >= kMaxPoints) throw std::overflow_error("Sobol index exceeds 2^32 points");
  for (std::size_t d = 0; d < dimension_; ++d) {
    out[d] = static_cast<double>(state_[d] ^ shift_[d]) * 0x1.0p-32;
  }
  ++index_;
  if (index_ < kMaxPoints) {
    const int bit = std::countr_zero(index_);
    for (std::size_t d = 0; d < dimension_; ++d) state_[d] ^= directions_[d][bit];
  }
}

UnitPoint SobolGenerator::next() {
  std::vector<double> coords(dimension_);
  next(coords);
  return UnitPoint(std::move(coords));
}

void SobolGenerator::point_at(std::uint64_t index, std::span<double> out) const {
  if (out.size() != dimension_) throw std::invalid_argument("Sobol output span has wrong dimension");
  if (index >= kMaxPoints) throw std::overflow_error("Sobol index exceeds 2^32 points");
  const std::uint64_t gray = index ^ (index >> 1);
  for (std::size_t d = 0; d < dimension_; ++d) {
    std::uint32_t x = 0;
    for (int b = 0; b < kBits && (gray >> b) != 0; ++b) {
      if ((gray >> b) & 1U) x ^= directions_[d][b];
    }
    out[d] = static_cast<double>(x ^ shift_[d]) * 0x1.0p-32;
  }
}

UnitPoint SobolGenerator::point_at(std::uint64_t index) const {
  std::vector<double> coords(dimension_);
  point_at(index, coords);
  return UnitPoint(std::move(coords));
}

UnitPoint PseudoRandomGenerator::next(std::size_t dimension) {
  if (dimension == 0) throw std::invalid_argument("dimension must be >= 1");
  std::vector<double> coords(dimension);
  fill(coords);
  return UnitPoint(std::move(coords));
}

void shift_in_place(std::span<double> point, std::span<const double> shift) {
  for (std::size_t d = 0; d < point.size(); ++d) {
    double x = point[d] + shift[d];
    if (x >= 1.0) x -= 1.0;
    point[d] = x;
  }
}

std::vector<UnitPoint> randomize_shift(std::span<const UnitPoint> points, const UnitPoint& shift) {
  std::vector<UnitPoint> out;
  out.reserve(points.size());
  std::vector<double> buf(shift.dimension());
  for (const UnitPoint& p : points) {
    if (p.dimension() != shift.dimension()) throw std::invalid_argument("randomize_shift: dimension mismatch");
    std::copy(p.coords().begin(), p.coords().end(), buf.begin());
    shift_in_place(buf, shift.coords());
    out.emplace_back(buf);
  }
  return out;
}

namespace {

void check_discrepancy_input(std::span<const UnitPoint> points) {
  if (points.empty()) throw std::invalid_argument("star discrepancy needs at least one point");
  if (points.size() > kStarDiscrepancyMaxPoints) {
    throw std::invalid_argument("exact star discrepancy limited to " + std::to_string(kStarDiscrepancyMaxPoints) +
                                " points");
  }
  for (const UnitPoint& p : points) {
    if (p.dimension() != 2) throw std::invalid_argument("star discrepancy is implemented for dimension 2 only");
  }
}

std::vector<double> critical_values(std::span<const UnitPoint> points, std::size_t axis) {
  std::vector<double> v;
  v.reserve(points.size() + 1);
  for (const UnitPoint& p : points) v.push_back(p[axis]);
  v.push_back(1.0);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

double star_discrepancy_2d_serial(std::span<const UnitPoint> points) {
  check_discrepancy_input(points);
  const auto xs = critical_values(points, 0);
  const auto ys = critical_values(points, 1);
  const double n = static_cast<double>(points.size());
  double best = 0.0;
  for (double c1 : xs) {
    for (double c2 : ys) {
      std::size_t open = 0;
      std::size_t closed = 0;
      for (const UnitPoint& p : points) {
        if (p[0] < c1 && p[1] < c2) ++open;
        if (p[0] <= c1 && p[1] <= c2) ++closed;
      }
      const double volume = c1 * c2;
      best = std::max({best, volume - static_cast<double>(open) / n, static_cast<double>(closed) / n - volume});
    }
  }
  return best;
}

double star_discrepancy_2d(std::span<const UnitPoint> points) {
  check_discrepancy_input(points);
  const auto xs = critical_values(points, 0);
  const auto ys = critical_values(points, 1);
  const double n = static_cast<double>(points.size());
  const auto nx = static_cast<std::ptrdiff_t>(xs.size());
  double best = 0.0;

#pragma omp parallel for schedule(dynamic) reduction(max : best)
  for (std::ptrdiff_t i = 0; i < nx; ++i) {
    const double c1 = xs[static_cast<std::size_t>(i)];
    std::vector<double> below;     // y of points with x < c1
    std::vector<double> at_most;   // y of points with x <= c1
    for (const UnitPoint& p : points) {
      if (p[0] < c1) below.push_back(p[1]);
      if (p[0] <= c1) at_most.push_back(p[1]);
    }
    std::sort(below.begin(), below.end());
    std::sort(at_most.begin(), at_most.end());
    for (double c2 : ys) {
      const auto open = std::lower_bound(below.begin(), below.end(), c2) - below.begin();
      const auto closed = std::upper_bound(at_most.begin(), at_most.end(), c2) - at_most.begin();
      const double volume = c1 * c2;
      best = std::max(best, std::max(volume - static_cast<double>(open) / n, static_cast<double>(closed) / n - volume));
    }
  }
  return best;
}

}  // namespace probci
