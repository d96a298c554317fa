#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "emlab/measure.hpp"

namespace emlab {

/// Dense cost matrix in row-major order, rows = sources.
struct CostMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

CostMatrix ground_costs(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Exact minimum-cost transport between `supply` and `demand` (equal total
/// mass) for a non-negative cost matrix. Successive shortest paths with
/// Johnson potentials on the bipartite residual graph.
double solve_transport(std::span<const double> supply, std::span<const double> demand,
                       const CostMatrix& cost);

/// Exact Wasserstein-1 distance. Closed forms on the interval and circle,
/// the transport solver on 2D spaces. Throws std::invalid_argument when the
/// measures live on different spaces.
double w1_distance(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Same quantity computed by the general transport solver regardless of
/// the space; used to cross-check the closed forms.
double w1_by_transport(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Exact W1 distance to Lebesgue measure on a 1D space.
double w1_to_lebesgue(const DiscreteMeasure& mu);

}  // namespace emlab
