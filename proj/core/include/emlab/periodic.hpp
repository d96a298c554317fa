#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "emlab/measure.hpp"
#include "emlab/system.hpp"

namespace emlab {

/// Reduced fraction num / den with 0 <= num <= den.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend auto operator<=>(const Rational&, const Rational&) = default;
};

/// Points of one periodic orbit, starting at its smallest point and listed
/// in dynamical order.
struct PeriodicOrbit {
  std::vector<Rational> points;

  std::size_t period() const { return points.size(); }
  /// Uniform measure on the orbit (an ergodic invariant measure).
  DiscreteMeasure measure(const PointSpace& space) const;
};

struct PeriodicPoints {
  std::size_t n = 0;
  /// Orbits covering Fix(f^n), ordered by their smallest point.
  std::vector<PeriodicOrbit> orbits;
  std::size_t fixed_point_count = 0;

  /// Equidistribution on Fix(f^n).
  DiscreteMeasure measure(const PointSpace& space) const;
};

inline constexpr int kMaxPeriod = 20;

/// Exact periodic points of f^n for mul_k or tent. Throws
/// std::invalid_argument for other maps, n < 1, n > 20, or more than 2^21
/// points.
PeriodicPoints periodic_points(const DynamicalSystem& sys, int n);

/// All orbits whose minimal period is at most max_period, shortest first.
std::vector<PeriodicOrbit> orbits_up_to_period(const DynamicalSystem& sys, int max_period);

/// Exact image of a rational under mul_k or tent.
Rational apply_exact(const DynamicalSystem& sys, Rational r);

}  // namespace emlab
