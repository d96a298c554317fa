#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "emlab/measure.hpp"
#include "emlab/orbit.hpp"
#include "emlab/system.hpp"

namespace emlab {

/// max_{0 <= i < n} distance(f^i x, f^i y).
double bowen_distance(const DynamicalSystem& sys, const Point& x, const Point& y, std::size_t n);

/// Orbit segments of a point sample, row-major: point i at time t is
/// points[i * length + t].
struct Trajectories {
  PointSpace space;
  std::size_t count = 0;
  std::size_t length = 0;
  std::vector<Point> points;

  const Point& at(std::size_t i, std::size_t t) const { return points[i * length + t]; }
};

Trajectories trajectories_from_starts(const DynamicalSystem& sys, std::span<const Point> starts, std::size_t length);
Trajectories trajectories_from_sampler(const DynamicalSystem& sys, Sampler sampler, std::uint64_t seed,
                                       std::size_t count, std::size_t length);

/// First `count` points of an additive-recurrence low-discrepancy sequence
/// (golden ratio in 1D, plastic number in 2D).
std::vector<Point> low_discrepancy_points(const PointSpace& space, std::size_t count);

struct GreedyCover {
  std::size_t centers = 0;
  /// Points newly covered by each center, in selection order.
  std::vector<std::size_t> ball_sizes;
};

/// Greedy cover of the sample by open d_n-balls of radius eps: scan points
/// by index, open a ball at the first uncovered one, repeat.
GreedyCover greedy_bowen_cover(const Trajectories& tr, std::size_t n, double eps);

enum class EntropyKind { topological, katok };

/// How log-counts are regressed on n. `linear`: log N = a + h n.
/// `with_log_term`: log N = a + b log n + h n, which absorbs polynomial
/// growth (shear in twist maps) that biases short-horizon slopes upward.
enum class EntropyFit { linear, with_log_term };

struct EntropyScale {
  double eps = 0.0;
  std::vector<std::size_t> counts;
  double slope = 0.0;
  double log_coefficient = 0.0;
  double residual = 0.0;
};

struct EntropyEstimate {
  std::string system;
  EntropyKind kind = EntropyKind::topological;
  /// Estimate in nats: the regression slope at the smallest eps, floored at 0.
  double value = 0.0;
  double slope = 0.0;
  double eps = 0.0;
  double delta = 0.0;  // katok only
  std::vector<std::size_t> n_grid;
  std::vector<std::size_t> counts;
  std::vector<double> log_counts;
  double residual = 0.0;
  EntropyFit fit = EntropyFit::linear;
  std::size_t sample_size = 0;
  /// Every eps of the grid, largest first.
  std::vector<EntropyScale> scales;
  /// Any of: unstable_slope (rms residual > 0.1), not_stabilized (the two
  /// smallest eps disagree by more than 0.05), saturated (a count exceeds a
  /// quarter of the sample), reference_not_ergodic.
  std::vector<std::string> flags;
};

/// JSON object {system, kind, eps, n_grid, counts, slope, residual, flags}.
std::string to_json(const EntropyEstimate& e);

/// Growth rate of greedy (n, eps)-cover counts of a low-discrepancy sample.
/// n_grid must be strictly increasing.
EntropyEstimate topological_entropy(const DynamicalSystem& sys, std::span<const double> eps_grid,
                                    std::span<const std::size_t> n_grid, std::size_t sample_budget = 4096,
                                    EntropyFit fit = EntropyFit::linear);

/// Growth rate of the number of d_n-balls (from the greedy cover, largest
/// first) needed to hold 1 - delta of a sample from the reference measure.
EntropyEstimate katok_entropy(const DynamicalSystem& sys, Sampler reference, double eps, double delta,
                              std::span<const std::size_t> n_grid, std::size_t sample_size = 4096,
                              std::uint64_t seed = 1, EntropyFit fit = EntropyFit::linear);

struct LyapunovSpectrum {
  /// Sorted descending.
  std::vector<double> exponents;
  double sum_positive = 0.0;
  std::size_t orbit_length = 0;
  /// Orbit average of log max(||Df||, 1).
  double log_norm_average = 0.0;
  /// Steps where the derivative vanished and were left out.
  std::size_t skipped_steps = 0;
};

/// 1D: orbit average of log|f'|. 2D: QR re-orthonormalization of the
/// Jacobian product every 10 steps. Throws for n == 0.
LyapunovSpectrum lyapunov(const DynamicalSystem& sys, const Point& x, std::size_t n);

struct RuelleReport {
  double entropy = 0.0;         // Katok estimate
  double sum_positive = 0.0;    // averaged over reference starts
  double derivative_bound = 0.0;  // dim * average log max(||Df||, 1)
  bool entropy_ok = false;      // entropy <= sum_positive + 0.05
  bool bound_ok = false;        // sum_positive <= derivative_bound + 0.05
  bool passed() const { return entropy_ok && bound_ok; }
};

struct RuelleOptions {
  Sampler reference = Sampler::uniform;
  double eps = 0.05;
  double delta = 0.1;
  std::vector<std::size_t> n_grid{2, 3, 4, 5, 6, 7};
  std::size_t entropy_sample = 1 << 16;
  EntropyFit fit = EntropyFit::with_log_term;
  std::size_t lyapunov_starts = 32;
  std::size_t lyapunov_length = 20000;
  std::uint64_t seed = 1;
};

RuelleReport ruelle_check(const DynamicalSystem& sys, const RuelleOptions& options = {});

struct LocalDimension {
  double value = 0.0;
  std::size_t atoms_used = 0;
  std::size_t dropped_scales = 0;
};

/// Mean over 100 atoms (drawn by weight with the given seed) of the slope of
/// log mu(B(x, eps)) against log eps over eps_grid; closed balls.
LocalDimension local_dimension(const DiscreteMeasure& mu, std::span<const double> eps_grid, std::uint64_t seed = 7,
                               std::size_t atoms = 100);

}  // namespace emlab
