// Point generators on the unit hypercube: Sobol low-discrepancy sequences,
// seeded pseudorandom streams, Cranley-Patterson shifts and the exact
// two-dimensional star discrepancy.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace probci {

/// A point of [0,1)^d. Construction validates every coordinate.
class UnitPoint {
 public:
  UnitPoint() = default;
  explicit UnitPoint(std::vector<double> coords);
  UnitPoint(std::initializer_list<double> coords);

  std::size_t dimension() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }
  operator std::span<const double>() const { return coords_; }

  friend bool operator==(const UnitPoint&, const UnitPoint&) = default;

 private:
  std::vector<double> coords_;
};

/// Primitive-polynomial direction numbers in the `d s a m_1 ... m_s` text
/// format. Row d describes Sobol dimension d (1-based); dimension 1 is the
/// van der Corput sequence and needs no row.
class DirectionTable {
 public:
  struct Row {
    unsigned dimension = 0;
    unsigned degree = 0;
    std::uint32_t coefficients = 0;
    std::vector<std::uint32_t> initial;
  };

  /// Joe-Kuo numbers for dimensions 2..21.
  static const DirectionTable& builtin();
  /// Parses the text format. A leading header line ("d s a m_i") and blank
  /// lines are skipped; rows must be consecutive starting at dimension 2.
  static DirectionTable parse(std::istream& in);
  static DirectionTable load(const std::filesystem::path& path);

  std::size_t max_dimension() const { return rows_.size() + 1; }
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<Row> rows_;
};

struct SobolOptions {
  /// Emit index 0 (the origin) first. Off by default so integration never
  /// evaluates the integrand at the corner.
  bool include_origin = false;
};

/// 32-bit Sobol generator (Antonov-Saleev Gray-code order). An optional
/// digital shift XORs every coordinate with a fixed 32-bit mask; it keeps
/// the dyadic equidistribution of the unshifted sequence.
class SobolGenerator {
 public:
  static constexpr int kBits = 32;
  static constexpr std::uint64_t kMaxPoints = std::uint64_t{1} << kBits;

  explicit SobolGenerator(std::size_t dimension, SobolOptions options = {},
                          const DirectionTable& table = DirectionTable::builtin());

  std::size_t dimension() const { return dimension_; }
  /// Index of the point the next call to next() returns.
  std::uint64_t index() const { return index_; }
  const SobolOptions& options() const { return options_; }

  UnitPoint next();
  void next(std::span<double> out);
  /// Random access to the point with the given index (0 is the origin).
  UnitPoint point_at(std::uint64_t index) const;
  void point_at(std::uint64_t index, std::span<double> out) const;

  void reset();
  void set_digital_shift(std::vector<std::uint32_t> shift);
  const std::vector<std::uint32_t>& digital_shift() const { return shift_; }

 private:
  void seek(std::uint64_t index);

  std::size_t dimension_;
  SobolOptions options_;
  std::vector<std::array<std::uint32_t, kBits>> directions_;
  std::vector<std::uint32_t> state_;
  std::vector<std::uint32_t> shift_;
  std::uint64_t index_ = 0;
};

/// Seed-replayable uniform stream. Coordinates carry 53 random bits.
class PseudoRandomGenerator {
 public:
  explicit PseudoRandomGenerator(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t bits() { return engine_(); }
  void fill(std::span<double> out) {
    for (double& x : out) x = uniform();
  }
  UnitPoint next(std::size_t dimension);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive child seeds from a master seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix_seed(master);
  for (std::uint64_t p : path) h = mix_seed(h ^ mix_seed(p));
  return h;
}

/// Coordinate-wise (x + shift) mod 1. Throws std::invalid_argument on a
/// dimension mismatch.
std::vector<UnitPoint> randomize_shift(std::span<const UnitPoint> points, const UnitPoint& shift);
void shift_in_place(std::span<double> point, std::span<const double> shift);

inline constexpr std::size_t kStarDiscrepancyMaxPoints = 500;

/// Exact star discrepancy of a 2-D point set, evaluated on the critical grid
/// of point coordinates (plus 1) with both open and closed anchored boxes.
/// OpenMP-parallel over the first box coordinate.
double star_discrepancy_2d(std::span<const UnitPoint> points);
/// Direct triple-loop reference for star_discrepancy_2d.
double star_discrepancy_2d_serial(std::span<const UnitPoint> points);

}  // namespace probci
