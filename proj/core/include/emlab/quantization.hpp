#pragma once

#include <cstddef>
#include <cstdint>

#include "emlab/measure.hpp"

namespace emlab {

struct Quantization {
  DiscreteMeasure approximation;
  double error;  // w1_distance(mu, approximation)
  /// True on 1D spaces. On 2D spaces the centers are restricted to the
  /// support of mu (k-medoids local optimum) and `error` is an upper bound
  /// on the optimal error, itself at most twice the optimum.
  bool exact;
};

/// Best W1 approximation of `mu` by a measure with at most `n_atoms` atoms.
/// Throws std::invalid_argument when n_atoms < 1.
Quantization quantize_best(const DiscreteMeasure& mu, std::size_t n_atoms, std::uint64_t seed = 0);

/// Minimal N with quantize_best(mu, N).error < eps, by doubling then binary
/// search. Exact on 1D spaces, an upper bound on 2D spaces.
std::size_t quantization_number(const DiscreteMeasure& mu, double eps, std::uint64_t seed = 0);

/// Optimal cost of splitting sorted weighted points into `groups` contiguous
/// runs, each served by its weighted median. Exposed for testing.
double linear_quantization_cost(std::span<const double> xs, std::span<const double> ws, std::size_t groups);

}  // namespace emlab
