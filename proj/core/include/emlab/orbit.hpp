#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "emlab/measure.hpp"
#include "emlab/system.hpp"

namespace emlab {

/// How cloud start points are drawn.
///   uniform           - uniform on the space. For mul_k and tent the start
///                       is a random digit stream, so orbits stay exact far
///                       beyond 53 iterates.
///   lattice           - midpoints (j + 1/2)/M, or a sqrt(M) x sqrt(M) grid of
///                       midpoints in 2D (M must be a perfect square).
///   bernoulli_mixture - mul_2 only: p ~ U(0,1), then i.i.d. Bernoulli(p)
///                       binary digits.
///   cantor            - mul_3 only: i.i.d. ternary digits from {0, 2}.
enum class Sampler { uniform, lattice, bernoulli_mixture, cantor };

std::string_view to_string(Sampler s);
Sampler sampler_from_string(std::string_view name);

/// SplitMix64 mix of (seed, index); per-start generator seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0,1) from the top 53 bits.
inline double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// The points f^k(x), k < n. mul_k and tent use exact dyadic arithmetic.
std::vector<Point> orbit(const DynamicalSystem& sys, const Point& x, std::size_t n);

/// (1/n) sum_{k<n} delta_{f^k(x)} in canonical form. Throws for n == 0.
DiscreteMeasure empirical_measure(const DynamicalSystem& sys, const Point& x, std::size_t n);

struct SampledOrbit {
  Point start;
  std::vector<Point> points;
};

/// Orbit of length n from the index-th start of a sampler with `count`
/// starts in total. Depends only on (seed, index), never on other starts.
SampledOrbit sample_orbit(const DynamicalSystem& sys, Sampler sampler, std::uint64_t seed, std::size_t index,
                          std::size_t count, std::size_t n);

struct CloudOptions {
  Sampler reference = Sampler::uniform;
  /// If positive, members are snapped to a grid with this many cells per axis.
  std::size_t bin_cells = 0;
  bool diagnostic = true;
};

/// Monte-Carlo sample of empirical measures e_n(x_j).
struct EmpiricalCloud {
  DynamicalSystem system;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  CloudOptions options;
  std::vector<Point> starts;
  std::vector<DiscreteMeasure> members;
  /// Per-member w1(e_{n/2}, e_n) and its mean. On 2D spaces with more than
  /// 512 orbit points the distance is taken between 16x16 grid snaps and
  /// `diagnostic_binned` is set.
  std::vector<double> diagnostics;
  double convergence_diagnostic = 0.0;
  bool diagnostic_binned = false;

  std::size_t size() const { return members.size(); }
  const PointSpace& space() const { return system.space(); }
};

EmpiricalCloud sample_cloud(const DynamicalSystem& sys, std::size_t M, std::size_t n, std::uint64_t seed,
                            const CloudOptions& options = {});

/// Cloud built directly from given measures (all on one space).
EmpiricalCloud make_cloud(const DynamicalSystem& sys, std::vector<DiscreteMeasure> members);

}  // namespace emlab
