#pragma once

#include <cstddef>
#include <cstdint>

#include "emlab/space.hpp"

namespace emlab {

/// Bounds on the covering number H(eps) of the space of probability
/// measures on `space` under the W1 distance (open eps-balls).
struct CoveringBounds {
  double eps = 0.0;
  /// Size of a greedy packing with pairwise distance >= 2 eps drawn from
  /// grid measures; no eps-ball holds two of them, so lower <= H(eps).
  std::uint64_t lower = 1;
  /// Size of an explicit family of grid measures that eps-covers every
  /// probability measure. Exact as an integer while below 2^53.
  double upper = 1.0;
  double log_upper = 0.0;
  /// The candidate family exceeded the budget and was subsampled; `lower`
  /// is then a truncated lower bound.
  bool truncated = false;
  std::size_t grid_points = 1;
  std::size_t mass_units = 1;
  std::size_t candidates_examined = 0;
};

/// Lower and upper bounds on H(eps). Candidate enumeration is shuffled with
/// a fixed seed so results are reproducible.
CoveringBounds measure_space_covering_bounds(PointSpace space, double eps, std::size_t budget,
                                             std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// log of the binomial coefficient C(n, k).
double log_binomial(double n, double k);

}  // namespace emlab
