#include "emlab/measure_covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "emlab/measure.hpp"
#include "emlab/parallel.hpp"
#include "emlab/transport.hpp"

namespace emlab {
namespace {

struct Grid {
  std::vector<Point> points;  // in covering-path order
  double path_length = 0.0;   // length of the path through consecutive points
  double snap_radius = 0.0;   // max distance from a point of the space to the grid
};

Grid make_grid(PointSpace space, double pitch) {
  Grid g;
  const auto q = static_cast<std::size_t>(std::ceil(1.0 / pitch - 1e-12));
  const double step = 1.0 / static_cast<double>(q);
  switch (space.kind()) {
    case SpaceKind::unit_interval:
      for (std::size_t i = 0; i <= q; ++i) g.points.push_back({i * step, 0.0});
      g.path_length = 1.0;
      g.snap_radius = step / 2;
      break;
    case SpaceKind::circle:
      for (std::size_t i = 0; i < q; ++i) g.points.push_back({i * step, 0.0});
      g.path_length = (q - 1) * step;
      g.snap_radius = step / 2;
      break;
    case SpaceKind::square:
      for (std::size_t r = 0; r <= q; ++r) {
        for (std::size_t c = 0; c <= q; ++c) {
          std::size_t cc = (r % 2 == 0) ? c : q - c;
          g.points.push_back({cc * step, r * step});
        }
      }
      g.path_length = static_cast<double>(q + 1) + 1.0;
      g.snap_radius = std::sqrt(2.0) * step / 2;
      break;
    case SpaceKind::torus2:
      for (std::size_t r = 0; r < q; ++r) {
        for (std::size_t c = 0; c < q; ++c) {
          std::size_t cc = (r % 2 == 0) ? c : q - 1 - c;
          g.points.push_back({cc * step, r * step});
        }
      }
      g.path_length = (q - 1) * step * q + (q - 1) * step;
      g.snap_radius = std::sqrt(2.0) * step / 2;
      break;
  }
  return g;
}

DiscreteMeasure measure_from_units(PointSpace space, const std::vector<Point>& pts,
                                   const std::vector<std::uint32_t>& units, std::size_t total) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (units[i] > 0) atoms.push_back(Atom{pts[i], static_cast<double>(units[i]) / static_cast<double>(total)});
  }
  return DiscreteMeasure(space, std::move(atoms));
}

void enumerate_compositions(std::size_t slots, std::size_t units, std::vector<std::uint32_t>& cur,
                            std::size_t pos, std::size_t left,
                            std::vector<std::vector<std::uint32_t>>& out) {
  if (pos + 1 == slots) {
    cur[pos] = static_cast<std::uint32_t>(left);
    out.push_back(cur);
    return;
  }
  for (std::size_t u = 0; u <= left; ++u) {
    cur[pos] = static_cast<std::uint32_t>(u);
    enumerate_compositions(slots, units, cur, pos + 1, left - u, out);
  }
}

}  // namespace

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

CoveringBounds measure_space_covering_bounds(PointSpace space, double eps, std::size_t budget,
                                             std::uint64_t seed) {
  if (!(eps > 0.0)) throw std::invalid_argument("covering bounds: eps must be > 0");
  if (budget == 0) throw std::invalid_argument("covering bounds: budget must be > 0");
  CoveringBounds out;
  out.eps = eps;
  if (eps >= space.diameter()) return out;

  // Upper bound: snap to a grid of pitch eps/2, then round the cumulative
  // mass along the grid path to multiples of 1/K. Snapping costs at most the
  // snap radius, rounding at most path_length / (2K) <= eps/4.
  const Grid cover = make_grid(space, eps / 2);
  const auto cover_units = static_cast<std::size_t>(std::ceil(2.0 * cover.path_length / eps - 1e-12));
  const double g = static_cast<double>(cover.points.size());
  out.log_upper = log_binomial(g + static_cast<double>(cover_units) - 1.0, g - 1.0);
  out.upper = std::exp(out.log_upper);
  if (out.log_upper < std::log(9.0e15)) out.upper = std::round(out.upper);

  // Lower bound: greedy packing over grid measures with weights in units of
  // 1/ceil(2/eps).
  const Grid cand = make_grid(space, eps / 2);
  const auto units = static_cast<std::size_t>(std::ceil(2.0 / eps - 1e-12));
  const std::size_t slots = cand.points.size();
  out.grid_points = slots;
  out.mass_units = units;
  const double log_family = log_binomial(static_cast<double>(slots + units - 1), static_cast<double>(slots - 1));

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint32_t>> family;
  if (log_family <= std::log(static_cast<double>(budget))) {
    std::vector<std::uint32_t> cur(slots, 0);
    enumerate_compositions(slots, units, cur, 0, units, family);
  } else {
    out.truncated = true;
    // Uniform compositions via stars and bars.
    std::vector<std::size_t> positions(slots + units - 1);
    std::iota(positions.begin(), positions.end(), 0);
    family.reserve(budget);
    for (std::size_t b = 0; b < budget; ++b) {
      std::vector<std::size_t> bars;
      bars.reserve(slots - 1);
      std::sample(positions.begin(), positions.end(), std::back_inserter(bars), slots - 1, rng);
      std::vector<std::uint32_t> comp(slots, 0);
      std::size_t prev = 0;
      for (std::size_t i = 0; i < bars.size(); ++i) {
        comp[i] = static_cast<std::uint32_t>(bars[i] - prev);
        prev = bars[i] + 1;
      }
      comp[slots - 1] = static_cast<std::uint32_t>(slots + units - 1 - prev);
      family.push_back(std::move(comp));
    }
  }
  out.candidates_examined = family.size();

  std::vector<DiscreteMeasure> measures;
  measures.reserve(family.size());
  for (const auto& comp : family) measures.push_back(measure_from_units(space, cand.points, comp, units));

  constexpr int kPasses = 3;
  const double separation = 2.0 * eps - 1e-12;
  std::vector<std::size_t> order(measures.size());
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t best = 1;
  for (int pass = 0; pass < kPasses; ++pass) {
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> packed;
    for (std::size_t idx : order) {
      bool far = true;
      for (std::size_t p : packed) {
        if (w1_distance(measures[idx], measures[p]) < separation) {
          far = false;
          break;
        }
      }
      if (far) packed.push_back(idx);
    }
    best = std::max<std::uint64_t>(best, packed.size());
  }

  // Farthest-point pass: add the candidate farthest from the packing until
  // none is 2 eps away. Finds spread-out packings random orders miss.
  std::vector<double> gap(measures.size(), std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  std::uint64_t count = 0;
  while (gap[next] >= separation) {
    ++count;
    const DiscreteMeasure& added = measures[next];
    parallel_for(measures.size(), [&](std::size_t i) {
      gap[i] = std::min(gap[i], w1_distance(measures[i], added));
    });
    next = static_cast<std::size_t>(std::max_element(gap.begin(), gap.end()) - gap.begin());
  }
  out.lower = std::max(best, count);
  return out;
}

}  // namespace emlab
