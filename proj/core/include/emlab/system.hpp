#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "emlab/space.hpp"

namespace emlab {

enum class MapKind { identity, mul, rotation, tent, logistic, cat_map, standard_map, product };

/// Row-major 2x2 derivative; 1D maps use only entry [0].
using Jacobian = std::array<double, 4>;

/// A map from the benchmark catalog together with its state space.
///
/// Immutable after construction. mul_k and tent are iterated in exact
/// integer arithmetic by iterate(): a double start is read as the dyadic
/// rational p / 2^62 it (nearly always exactly) represents.
class DynamicalSystem {
 public:
  static DynamicalSystem identity(PointSpace space = PointSpace::unit_interval());
  /// x -> k x mod 1 on the circle, k >= 2.
  static DynamicalSystem mul(int k);
  static DynamicalSystem rotation(double alpha);
  static DynamicalSystem tent();
  static DynamicalSystem logistic(double a = 4.0);
  /// (x, y) -> (2x + y, x + y) mod 1.
  static DynamicalSystem cat_map();
  /// Chirikov map in (angle, momentum) coordinates on the unit torus:
  /// p' = p + K/(2 pi) sin(2 pi theta), theta' = theta + p'.
  static DynamicalSystem standard_map(double K);
  /// Coordinatewise product of two 1D systems on the same kind of space.
  static DynamicalSystem product(const DynamicalSystem& first, const DynamicalSystem& second);

  MapKind kind() const { return kind_; }
  const PointSpace& space() const { return space_; }
  int dimension() const { return space_.box_dimension(); }
  const std::vector<double>& parameters() const { return params_; }
  double parameter(std::size_t i) const { return params_.at(i); }
  bool has_derivative() const { return true; }
  /// Every catalog map is symbolic (exactly codable) or not.
  bool symbolic() const { return kind_ == MapKind::mul || kind_ == MapKind::tent; }
  int mul_factor() const;
  /// Number of branches: k for mul_k, 2 for tent and logistic, 1 otherwise
  /// (products multiply).
  double degree() const;
  std::string name() const;

  const DynamicalSystem& first() const;
  const DynamicalSystem& second() const;

  /// One floating-point step.
  Point apply(const Point& x) const;
  /// f^n(x). Exact rational arithmetic for mul_k and tent; repeated
  /// addition for rotations; floating-point steps otherwise.
  Point iterate(const Point& x, std::uint64_t n) const;
  Jacobian derivative(const Point& x) const;

 private:
  DynamicalSystem(MapKind kind, PointSpace space, std::vector<double> params)
      : kind_(kind), space_(space), params_(std::move(params)) {}

  MapKind kind_;
  PointSpace space_;
  std::vector<double> params_;
  std::shared_ptr<const DynamicalSystem> first_;
  std::shared_ptr<const DynamicalSystem> second_;
};

/// Operator norm of a 2x2 (or 1x1) Jacobian.
double operator_norm(const Jacobian& j, int dimension);

/// The golden-mean rotation number (sqrt(5) - 1) / 2.
inline constexpr double kGoldenRotation = 0.61803398874989484820;

}  // namespace emlab
