#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emlab/kmedoids.hpp"
#include "emlab/orbit.hpp"
#include "emlab/periodic.hpp"
#include "emlab/scaling.hpp"

namespace emlab {

/// Bounds on the metric emergence of a cloud at one scale.
///
/// n_upper: members chosen as centers whose mean distance to the cloud is
/// below eps. n_lower: no family of arbitrary probability measures with
/// fewer elements reaches mean distance below eps on this cloud.
struct EmergencePoint {
  double eps = 0.0;
  std::size_t n_lower = 1;
  std::size_t n_upper = 1;
  /// Mean distance from members to the chosen centers, and its standard error.
  double mean_residual = 0.0;
  double residual_stderr = 0.0;
  /// Exhaustive medoid optimum at eps (clouds of at most 12 members).
  std::optional<std::size_t> n_exact;
  std::vector<std::size_t> centers;
  /// Any of: saturated (n_upper equals the cloud size).
  std::vector<std::string> flags;
};

struct EmergenceCurve {
  std::vector<EmergencePoint> points;
  std::size_t cloud_size = 0;
  std::string provenance;
};

struct EmergenceOptions {
  MedoidSearchOptions search;
  /// Clouds up to this size get exhaustive bounds.
  std::size_t exact_limit = 12;
};

/// Lower bound from disjoint member groups: for a packing of members with
/// pairwise distance > 2r, members within r/2 of an uncovered packing point
/// cost at least r/2 each. Maximized over a grid of radii.
std::size_t ball_mass_lower_bound(const DistanceMatrix& d, double eps);

EmergenceCurve emergence_curve(const DistanceMatrix& d, std::span<const double> eps_grid,
                               const EmergenceOptions& options = {});
EmergenceCurve emergence_curve(const EmpiricalCloud& cloud, std::span<const double> eps_grid,
                               const EmergenceOptions& options = {});
EmergencePoint metric_emergence(const EmpiricalCloud& cloud, double eps, const EmergenceOptions& options = {});

/// CSV with header `eps,N_lower,N_upper,mean_residual,flags`.
void write_curve_csv(std::ostream& out, const EmergenceCurve& curve);

struct TopologicalEmergence {
  std::size_t count = 0;
  std::vector<PeriodicOrbit> packing;
  std::size_t candidates = 0;
};

/// Greedy packing of periodic-orbit measures (minimal period <= max_period,
/// shortest orbits first) with pairwise W1 distance >= 2 eps. Its size is a
/// lower bound for the eps-covering number of the ergodic measures.
TopologicalEmergence topological_emergence_lower(const DynamicalSystem& sys, int max_period, double eps);

/// Order estimate of 1 / (fraction of members within eps of `center`).
/// Flags `degenerate` when the ball holds the whole cloud at every scale.
OrderEstimate local_emergence_order(const EmpiricalCloud& cloud, const DiscreteMeasure& center,
                                    std::span<const double> eps_grid);

/// Average of local orders at cloud members next to the order of the
/// emergence curve; reported together, no inequality is asserted.
struct LocalOrderProbe {
  double mean_local_order = 0.0;
  std::size_t centers_used = 0;
  std::size_t centers_flagged = 0;
  OrderEstimate global;
};

LocalOrderProbe local_order_probe(const DistanceMatrix& d, std::span<const double> eps_grid,
                                  const EmergenceCurve& curve, std::size_t centers);

}  // namespace emlab
