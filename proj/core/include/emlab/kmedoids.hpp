#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "emlab/measure.hpp"

namespace emlab {

/// Symmetric matrix of pairwise distances with a zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n = 0) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double d) {
    values_[i * n_ + j] = d;
    values_[j * n_ + i] = d;
  }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

/// Pairwise w1_distance over all index pairs, computed in parallel.
DistanceMatrix pairwise_w1(std::span<const DiscreteMeasure> members);

struct MedoidSet {
  std::vector<std::size_t> medoids;  // sorted
  double cost = 0.0;                 // sum over points of the distance to the nearest medoid
};

/// Distance from every point to its nearest medoid.
std::vector<double> residuals(const DistanceMatrix& d, std::span<const std::size_t> medoids);
double assignment_cost(const DistanceMatrix& d, std::span<const std::size_t> medoids);

/// Mean residual below `eps` with a 1e-12 guard against round-off at ties.
bool meets_budget(double cost, std::size_t points, double eps);

/// Minimum-cost k-subset by exhaustive search (lexicographically smallest
/// among ties). Throws std::invalid_argument if there are more than 20
/// points or k is out of range.
MedoidSet exact_medoids(const DistanceMatrix& d, std::size_t k);

/// Smallest k whose exact optimum meets the budget eps.
std::size_t exact_center_count(const DistanceMatrix& d, double eps);

struct MedoidSearchOptions {
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
  /// Clouds up to this size get swap refinement at every N. Larger clouds
  /// are refined (at most `large_swap_passes` passes) only at sizes probed
  /// by a bisection below the first size that meets each budget.
  std::size_t full_swap_limit = 512;
  std::size_t max_swap_passes = 50;
  std::size_t large_swap_passes = 8;
};

/// Greedy k-medoids chains grown one center at a time.
///
/// Each restart starts from one center (restart 0 from the best single
/// medoid, others from seeded random members), then repeatedly adds the
/// farthest point (lowest index on ties), alternates Voronoi/medoid
/// updates, and refines by best-improvement swaps. Chains stop once they
/// meet the smallest budget in `eps_targets`.
class MedoidScan {
 public:
  MedoidScan(const DistanceMatrix& d, std::span<const double> eps_targets, const MedoidSearchOptions& options = {});

  /// Smallest N for which some chain meets the budget eps; the point count
  /// when no chain does.
  std::size_t smallest_meeting(double eps) const;
  /// Best solution found with exactly N centers (N must have been reached).
  const MedoidSet& best(std::size_t n) const;
  std::size_t max_centers() const { return best_.size(); }

 private:
  std::size_t points_;
  std::vector<MedoidSet> best_;  // index N - 1
};

}  // namespace emlab
