#include "emlab/system.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace emlab {
namespace {

__extension__ typedef unsigned __int128 u128;

constexpr int kRationalBits = 62;
constexpr std::uint64_t kRationalDen = std::uint64_t{1} << kRationalBits;

std::uint64_t to_dyadic(double x) {
  x = wrap_unit(x);
  return static_cast<std::uint64_t>(std::ldexp(x, kRationalBits));
}

double from_dyadic(std::uint64_t p) { return std::ldexp(static_cast<double>(p), -kRationalBits); }

double step_1d(const DynamicalSystem& s, double x) {
  switch (s.kind()) {
    case MapKind::identity: return x;
    case MapKind::mul: return wrap_unit(s.parameter(0) * x);
    case MapKind::rotation: return wrap_unit(x + s.parameter(0));
    case MapKind::tent: return x < 0.5 ? 2.0 * x : 2.0 - 2.0 * x;
    case MapKind::logistic: return s.parameter(0) * x * (1.0 - x);
    default: throw std::logic_error("step_1d on a 2D system");
  }
}

double derivative_1d(const DynamicalSystem& s, double x) {
  switch (s.kind()) {
    case MapKind::identity: return 1.0;
    case MapKind::mul: return s.parameter(0);
    case MapKind::rotation: return 1.0;
    case MapKind::tent: return x < 0.5 ? 2.0 : -2.0;
    case MapKind::logistic: return s.parameter(0) * (1.0 - 2.0 * x);
    default: throw std::logic_error("derivative_1d on a 2D system");
  }
}

double iterate_1d(const DynamicalSystem& s, double x, std::uint64_t n) {
  switch (s.kind()) {
    case MapKind::identity: return x;
    case MapKind::mul: {
      const auto k = static_cast<u128>(s.mul_factor());
      std::uint64_t p = to_dyadic(x);
      for (std::uint64_t i = 0; i < n && p != 0; ++i) {
        p = static_cast<std::uint64_t>((k * p) & (kRationalDen - 1));
      }
      return from_dyadic(p);
    }
    case MapKind::tent: {
      std::uint64_t p = static_cast<std::uint64_t>(std::ldexp(x, kRationalBits));
      for (std::uint64_t i = 0; i < n; ++i) p = (2 * p <= kRationalDen) ? 2 * p : 2 * (kRationalDen - p);
      return from_dyadic(p);
    }
    default:
      for (std::uint64_t i = 0; i < n; ++i) x = step_1d(s, x);
      return x;
  }
}

}  // namespace

DynamicalSystem DynamicalSystem::identity(PointSpace space) { return {MapKind::identity, space, {}}; }

DynamicalSystem DynamicalSystem::mul(int k) {
  if (k < 2) throw std::invalid_argument("mul_k needs k >= 2");
  return {MapKind::mul, PointSpace::circle(), {static_cast<double>(k)}};
}

DynamicalSystem DynamicalSystem::rotation(double alpha) {
  return {MapKind::rotation, PointSpace::circle(), {wrap_unit(alpha)}};
}

DynamicalSystem DynamicalSystem::tent() { return {MapKind::tent, PointSpace::unit_interval(), {}}; }

DynamicalSystem DynamicalSystem::logistic(double a) {
  if (!(a >= 0.0 && a <= 4.0)) throw std::invalid_argument("logistic parameter must lie in [0,4]");
  return {MapKind::logistic, PointSpace::unit_interval(), {a}};
}

DynamicalSystem DynamicalSystem::cat_map() { return {MapKind::cat_map, PointSpace::torus2(), {}}; }

DynamicalSystem DynamicalSystem::standard_map(double K) {
  return {MapKind::standard_map, PointSpace::torus2(), {K}};
}

DynamicalSystem DynamicalSystem::product(const DynamicalSystem& a, const DynamicalSystem& b) {
  if (a.dimension() != 1 || b.dimension() != 1) throw std::invalid_argument("product needs two 1D systems");
  if (a.space() != b.space()) throw std::invalid_argument("product factors must share a space kind");
  PointSpace space = a.space().kind() == SpaceKind::circle ? PointSpace::torus2() : PointSpace::square();
  DynamicalSystem s(MapKind::product, space, {});
  s.first_ = std::make_shared<const DynamicalSystem>(a);
  s.second_ = std::make_shared<const DynamicalSystem>(b);
  return s;
}

int DynamicalSystem::mul_factor() const {
  if (kind_ != MapKind::mul) throw std::logic_error("mul_factor on a non-mul system");
  return static_cast<int>(params_[0]);
}

double DynamicalSystem::degree() const {
  switch (kind_) {
    case MapKind::mul: return params_[0];
    case MapKind::tent: return 2.0;
    case MapKind::logistic: return 2.0;
    case MapKind::product: return first_->degree() * second_->degree();
    default: return 1.0;
  }
}

std::string DynamicalSystem::name() const {
  char buf[64];
  switch (kind_) {
    case MapKind::identity: return "identity_" + std::string(to_string(space_.kind()));
    case MapKind::mul: return "mul_" + std::to_string(mul_factor());
    case MapKind::rotation:
      std::snprintf(buf, sizeof buf, "rotation(%.6g)", params_[0]);
      return buf;
    case MapKind::tent: return "tent";
    case MapKind::logistic:
      std::snprintf(buf, sizeof buf, "logistic(%.6g)", params_[0]);
      return buf;
    case MapKind::cat_map: return "cat_map";
    case MapKind::standard_map:
      std::snprintf(buf, sizeof buf, "standard_map(%.6g)", params_[0]);
      return buf;
    case MapKind::product: return "product(" + first_->name() + "," + second_->name() + ")";
  }
  return "unknown";
}

const DynamicalSystem& DynamicalSystem::first() const {
  if (!first_) throw std::logic_error("not a product system");
  return *first_;
}

const DynamicalSystem& DynamicalSystem::second() const {
  if (!second_) throw std::logic_error("not a product system");
  return *second_;
}

Point DynamicalSystem::apply(const Point& x) const {
  switch (kind_) {
    case MapKind::identity: return x;
    case MapKind::cat_map: return {wrap_unit(2.0 * x[0] + x[1]), wrap_unit(x[0] + x[1])};
    case MapKind::standard_map: {
      const double kick = params_[0] / (2.0 * std::numbers::pi) * std::sin(2.0 * std::numbers::pi * x[0]);
      const double p = wrap_unit(x[1] + kick);
      return {wrap_unit(x[0] + p), p};
    }
    case MapKind::product: return {step_1d(*first_, x[0]), step_1d(*second_, x[1])};
    default: return {step_1d(*this, x[0]), 0.0};
  }
}

Point DynamicalSystem::iterate(const Point& x, std::uint64_t n) const {
  if (kind_ == MapKind::product) return {iterate_1d(*first_, x[0], n), iterate_1d(*second_, x[1], n)};
  if (dimension() == 1) return {iterate_1d(*this, x[0], n), 0.0};
  Point y = x;
  if (kind_ == MapKind::identity) return y;
  for (std::uint64_t i = 0; i < n; ++i) y = apply(y);
  return y;
}

Jacobian DynamicalSystem::derivative(const Point& x) const {
  switch (kind_) {
    case MapKind::identity: return dimension() == 1 ? Jacobian{1, 0, 0, 0} : Jacobian{1, 0, 0, 1};
    case MapKind::cat_map: return {2, 1, 1, 1};
    case MapKind::standard_map: {
      const double c = params_[0] * std::cos(2.0 * std::numbers::pi * x[0]);
      return {1.0 + c, 1.0, c, 1.0};
    }
    case MapKind::product: return {derivative_1d(*first_, x[0]), 0, 0, derivative_1d(*second_, x[1])};
    default: return {derivative_1d(*this, x[0]), 0, 0, 0};
  }
}

double operator_norm(const Jacobian& j, int dimension) {
  if (dimension == 1) return std::abs(j[0]);
  // Largest singular value of [[a, b], [c, d]].
  const double a = j[0], b = j[1], c = j[2], d = j[3];
  const double s = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * det * det));
  return std::sqrt(0.5 * (s + disc));
}

}  // namespace emlab
