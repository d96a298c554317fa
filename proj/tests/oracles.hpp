// Brute-force reference implementations shared by the unit and acceptance
// tests. Kept deliberately simple and independent of the library solvers.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "emlab/measure.hpp"
#include "emlab/space.hpp"

namespace oracle {

// Random measure with 1..max_atoms atoms whose weights are multiples of
// 1/units (every atom gets at least one unit).
inline emlab::DiscreteMeasure grid_weight_measure(emlab::PointSpace space, std::mt19937_64& rng,
                                                  std::size_t max_atoms, int units) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t k = 1 + rng() % max_atoms;
  std::vector<int> cuts;
  for (int c = 1; c < units; ++c) cuts.push_back(c);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(k - 1);
  cuts.push_back(0);
  cuts.push_back(units);
  std::sort(cuts.begin(), cuts.end());
  std::vector<emlab::Atom> atoms;
  for (std::size_t i = 0; i < k; ++i) {
    emlab::Point p{u(rng), space.box_dimension() == 2 ? u(rng) : 0.0};
    atoms.push_back({p, static_cast<double>(cuts[i + 1] - cuts[i]) / units});
  }
  return emlab::DiscreteMeasure(space, atoms);
}

// W1 between measures whose weights are multiples of 1/units: split both
// into `units` unit masses and solve the assignment problem exhaustively
// (dynamic programming over subsets of the second side). Transport
// problems with integer margins have integral optimal plans, so this is
// exact.
inline double unit_mass_w1(const emlab::DiscreteMeasure& a, const emlab::DiscreteMeasure& b, int units) {
  auto expand = [units](const emlab::DiscreteMeasure& m) {
    std::vector<emlab::Point> pts;
    for (const auto& at : m.atoms()) {
      const int c = static_cast<int>(at.weight * units + 0.5);
      for (int i = 0; i < c; ++i) pts.push_back(at.point);
    }
    return pts;
  };
  const auto pa = expand(a);
  const auto pb = expand(b);
  const std::size_t n = pa.size();
  if (n != pb.size() || n != static_cast<std::size_t>(units)) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> best(std::size_t{1} << n, std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  for (std::uint32_t mask = 0; mask < best.size(); ++mask) {
    const std::size_t i = static_cast<std::size_t>(__builtin_popcount(mask));
    if (i >= n || best[mask] == std::numeric_limits<double>::infinity()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (1u << j)) continue;
      const double c = best[mask] + a.space().distance(pa[i], pb[j]);
      best[mask | (1u << j)] = std::min(best[mask | (1u << j)], c);
    }
  }
  return best.back() / units;
}

// Random piecewise-linear 1-Lipschitz function of the coordinates:
// a sum of weighted distances to anchor points (weights summing to 1)
// plus a constant.
struct LipschitzTest {
  emlab::PointSpace space;
  std::vector<emlab::Point> anchors;
  std::vector<double> signed_weights;

  double operator()(const emlab::Point& x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) v += signed_weights[i] * space.distance(x, anchors[i]);
    return v;
  }
};

inline LipschitzTest random_lipschitz(emlab::PointSpace space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LipschitzTest t{space, {}, {}};
  const std::size_t k = 1 + rng() % 4;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    t.anchors.push_back({u(rng), space.box_dimension() == 2 ? u(rng) : 0.0});
    const double w = u(rng);
    t.signed_weights.push_back((rng() & 1) ? w : -w);
    total += w;
  }
  for (auto& w : t.signed_weights) w /= total;
  return t;
}

inline double integrate(const LipschitzTest& f, const emlab::DiscreteMeasure& m) {
  double s = 0.0;
  for (const auto& a : m.atoms()) s += a.weight * f(a.point);
  return s;
}

}  // namespace oracle
