#include "emlab/space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace emlab {

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::unit_interval: return "unit_interval";
    case SpaceKind::circle: return "circle";
    case SpaceKind::square: return "square";
    case SpaceKind::torus2: return "torus2";
  }
  return "unknown";
}

SpaceKind space_kind_from_string(std::string_view name) {
  if (name == "unit_interval" || name == "interval") return SpaceKind::unit_interval;
  if (name == "circle") return SpaceKind::circle;
  if (name == "square") return SpaceKind::square;
  if (name == "torus2" || name == "torus") return SpaceKind::torus2;
  throw std::invalid_argument("unknown space kind: " + std::string(name));
}

int PointSpace::box_dimension() const {
  return (kind_ == SpaceKind::unit_interval || kind_ == SpaceKind::circle) ? 1 : 2;
}

double PointSpace::diameter() const {
  switch (kind_) {
    case SpaceKind::unit_interval: return 1.0;
    case SpaceKind::circle: return 0.5;
    case SpaceKind::square: return std::sqrt(2.0);
    case SpaceKind::torus2: return std::sqrt(2.0) / 2.0;
  }
  return 0.0;
}

double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double PointSpace::distance(const Point& a, const Point& b) const {
  switch (kind_) {
    case SpaceKind::unit_interval: return std::abs(a[0] - b[0]);
    case SpaceKind::circle: return circle_gap(a[0], b[0]);
    case SpaceKind::square: return std::hypot(a[0] - b[0], a[1] - b[1]);
    case SpaceKind::torus2: return std::hypot(circle_gap(a[0], b[0]), circle_gap(a[1], b[1]));
  }
  return 0.0;
}

bool PointSpace::contains(const Point& p) const {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  switch (kind_) {
    case SpaceKind::unit_interval: return in01(p[0]);
    case SpaceKind::circle: return std::isfinite(p[0]);
    case SpaceKind::square: return in01(p[0]) && in01(p[1]);
    case SpaceKind::torus2: return std::isfinite(p[0]) && std::isfinite(p[1]);
  }
  return false;
}

Point PointSpace::reduce(const Point& p) const {
  if (!contains(p)) throw std::domain_error("point outside " + std::string(to_string(kind_)));
  switch (kind_) {
    case SpaceKind::unit_interval: return {p[0], 0.0};
    case SpaceKind::circle: return {wrap_unit(p[0]), 0.0};
    case SpaceKind::square: return p;
    case SpaceKind::torus2: return {wrap_unit(p[0]), wrap_unit(p[1])};
  }
  return p;
}

}  // namespace emlab
