#include "emlab/periodic.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace emlab {
namespace {

__extension__ typedef __int128 i128;

constexpr std::size_t kMaxPoints = std::size_t{1} << 21;

Rational reduced(std::int64_t num, std::int64_t den) {
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == den) return {1, 1};
  if (num == 0) return {0, 1};
  return {num, den};
}

std::vector<Rational> fixed_points_mul(int k, int n) {
  std::int64_t q = 1;
  for (int i = 0; i < n; ++i) {
    q *= k;
    if (static_cast<std::size_t>(q) > kMaxPoints + 1) throw std::invalid_argument("periodic point count too large");
  }
  q -= 1;
  std::vector<Rational> pts;
  pts.reserve(static_cast<std::size_t>(q));
  for (std::int64_t j = 0; j < q; ++j) pts.push_back(reduced(j, q));
  return pts;
}

// Fixed points of tent^n: for every itinerary the inverse branches
// y/2 and 1 - y/2 compose to y -> (A y + B) / 2^n, whose fixed point is
// B / (2^n - A).
std::vector<Rational> fixed_points_tent(int n) {
  const std::int64_t words = std::int64_t{1} << n;
  if (static_cast<std::size_t>(words) > kMaxPoints) throw std::invalid_argument("periodic point count too large");
  std::vector<Rational> pts;
  pts.reserve(static_cast<std::size_t>(words));
  for (std::int64_t w = 0; w < words; ++w) {
    std::int64_t a = 1, b = 0, d = 1;
    for (int i = n - 1; i >= 0; --i) {
      if ((w >> i) & 1) {
        a = -a;
        b = 2 * d - b;
      }
      d *= 2;
    }
    pts.push_back(reduced(b, d - a));
  }
  std::sort(pts.begin(), pts.end(), [](const Rational& x, const Rational& y) {
    return static_cast<i128>(x.num) * y.den < static_cast<i128>(y.num) * x.den;
  });
  return pts;
}

}  // namespace

Rational apply_exact(const DynamicalSystem& sys, Rational r) {
  if (sys.kind() == MapKind::mul) return reduced((sys.mul_factor() * r.num) % r.den, r.den);
  if (sys.kind() == MapKind::tent) {
    const std::int64_t twice = 2 * r.num;
    return reduced(twice <= r.den ? twice : 2 * r.den - twice, r.den);
  }
  throw std::invalid_argument("exact iteration needs mul_k or tent");
}

DiscreteMeasure PeriodicOrbit::measure(const PointSpace& space) const {
  std::vector<Point> pts;
  pts.reserve(points.size());
  for (const auto& r : points) pts.push_back({r.value(), 0.0});
  return DiscreteMeasure::uniform(space, pts);
}

DiscreteMeasure PeriodicPoints::measure(const PointSpace& space) const {
  std::vector<Point> pts;
  pts.reserve(fixed_point_count);
  for (const auto& o : orbits) {
    for (const auto& r : o.points) pts.push_back({r.value(), 0.0});
  }
  return DiscreteMeasure::uniform(space, pts);
}

PeriodicPoints periodic_points(const DynamicalSystem& sys, int n) {
  if (n < 1 || n > kMaxPeriod) throw std::invalid_argument("period must lie in [1, 20]");
  std::vector<Rational> pts;
  if (sys.kind() == MapKind::mul) {
    pts = fixed_points_mul(sys.mul_factor(), n);
  } else if (sys.kind() == MapKind::tent) {
    pts = fixed_points_tent(n);
  } else {
    throw std::invalid_argument("periodic points are only enumerated for mul_k and tent");
  }
  std::map<Rational, std::size_t> index;
  for (std::size_t i = 0; i < pts.size(); ++i) index.emplace(pts[i], i);
  if (index.size() != pts.size()) throw std::logic_error("duplicate periodic points");

  PeriodicPoints result;
  result.n = static_cast<std::size_t>(n);
  result.fixed_point_count = pts.size();
  std::vector<char> seen(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (seen[i]) continue;
    PeriodicOrbit orbit;
    Rational r = pts[i];
    for (;;) {
      const auto it = index.find(r);
      if (it == index.end()) throw std::logic_error("orbit left the periodic set");
      if (seen[it->second]) break;
      seen[it->second] = 1;
      orbit.points.push_back(r);
      r = apply_exact(sys, r);
    }
    result.orbits.push_back(std::move(orbit));
  }
  return result;
}

std::vector<PeriodicOrbit> orbits_up_to_period(const DynamicalSystem& sys, int max_period) {
  if (max_period < 1 || max_period > kMaxPeriod) throw std::invalid_argument("period must lie in [1, 20]");
  std::vector<PeriodicOrbit> out;
  for (int n = 1; n <= max_period; ++n) {
    for (auto& o : periodic_points(sys, n).orbits) {
      if (o.period() == static_cast<std::size_t>(n)) out.push_back(std::move(o));
    }
  }
  return out;
}

}  // namespace emlab
