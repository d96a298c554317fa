#pragma once

#include <array>
#include <string>
#include <string_view>

namespace emlab {

/// Coordinates of a point. One-dimensional spaces only use the first entry;
/// the second is kept at zero.
using Point = std::array<double, 2>;

enum class SpaceKind {
  unit_interval,  // [0,1]
  circle,         // R/Z
  square,         // [0,1]^2
  torus2,         // (R/Z)^2
};

std::string_view to_string(SpaceKind kind);
SpaceKind space_kind_from_string(std::string_view name);

/// A compact metric space from the fixed catalog. Distances on the circle
/// and torus are geodesic (coordinates are read modulo 1).
class PointSpace {
 public:
  constexpr explicit PointSpace(SpaceKind kind = SpaceKind::unit_interval) : kind_(kind) {}

  static PointSpace unit_interval() { return PointSpace(SpaceKind::unit_interval); }
  static PointSpace circle() { return PointSpace(SpaceKind::circle); }
  static PointSpace square() { return PointSpace(SpaceKind::square); }
  static PointSpace torus2() { return PointSpace(SpaceKind::torus2); }

  SpaceKind kind() const { return kind_; }
  int box_dimension() const;
  double diameter() const;
  bool periodic() const { return kind_ == SpaceKind::circle || kind_ == SpaceKind::torus2; }

  double distance(const Point& a, const Point& b) const;

  /// Reduces periodic coordinates to [0,1) and zeroes unused coordinates.
  /// Throws std::domain_error for points outside a non-periodic space.
  Point reduce(const Point& p) const;
  bool contains(const Point& p) const;

  friend bool operator==(const PointSpace&, const PointSpace&) = default;

 private:
  SpaceKind kind_;
};

/// x mod 1 in [0,1), robust to the rounding case x - floor(x) == 1.
double wrap_unit(double x);

/// Signed-free distance between two coordinates on R/Z.
inline double circle_gap(double a, double b) {
  double d = a - b;
  d -= static_cast<double>(static_cast<long long>(d));
  if (d < 0) d = -d;
  return d > 0.5 ? 1.0 - d : d;
}

}  // namespace emlab
