#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "emlab/measure.hpp"
#include "emlab/measure_covering.hpp"
#include "emlab/quantization.hpp"
#include "emlab/transport.hpp"
#include "oracles.hpp"

using namespace emlab;

namespace {

const PointSpace kSpaces[] = {PointSpace::unit_interval(), PointSpace::circle(), PointSpace::square(),
                              PointSpace::torus2()};

Point random_point(const PointSpace& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {u(rng), s.box_dimension() == 2 ? u(rng) : 0.0};
}

DiscreteMeasure random_measure(const PointSpace& s, std::mt19937_64& rng, std::size_t max_atoms) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const std::size_t k = 1 + rng() % max_atoms;
  std::vector<Atom> atoms;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    atoms.push_back({random_point(s, rng), u(rng)});
    total += atoms.back().weight;
  }
  for (auto& a : atoms) a.weight /= total;
  return DiscreteMeasure(s, atoms);
}

}  // namespace

TEST(PointSpace, MetricAxiomsAndDiameter) {
  std::mt19937_64 rng(1);
  for (const auto& s : kSpaces) {
    for (int t = 0; t < 2000; ++t) {
      const Point x = random_point(s, rng), y = random_point(s, rng), z = random_point(s, rng);
      EXPECT_EQ(s.distance(x, y), s.distance(y, x));
      EXPECT_GE(s.distance(x, y), 0.0);
      EXPECT_EQ(s.distance(x, x), 0.0);
      EXPECT_LE(s.distance(x, z), s.distance(x, y) + s.distance(y, z) + 1e-12);
      EXPECT_LE(s.distance(x, y), s.diameter() + 1e-15);
    }
  }
  EXPECT_DOUBLE_EQ(PointSpace::unit_interval().diameter(), 1.0);
  EXPECT_DOUBLE_EQ(PointSpace::circle().diameter(), 0.5);
  EXPECT_DOUBLE_EQ(PointSpace::square().diameter(), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(PointSpace::torus2().diameter(), std::sqrt(2.0) / 2);
}

TEST(PointSpace, ReduceWrapsPeriodicCoordinates) {
  EXPECT_DOUBLE_EQ(PointSpace::circle().reduce({1.25, 7.0})[0], 0.25);
  EXPECT_EQ(PointSpace::circle().reduce({1.25, 7.0})[1], 0.0);
  EXPECT_DOUBLE_EQ(PointSpace::torus2().reduce({-0.25, 2.5})[0], 0.75);
  EXPECT_THROW(PointSpace::unit_interval().reduce({1.5, 0.0}), std::domain_error);
}

TEST(DiscreteMeasure, CanonicalForm) {
  const auto s = PointSpace::circle();
  DiscreteMeasure m(s, {{{0.75, 0.0}, 0.25}, {{1.25, 0.0}, 0.25}, {{0.25, 0.0}, 0.5}});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].point[0], 0.25);
  EXPECT_EQ(m[0].weight, 0.75);
  EXPECT_THROW(DiscreteMeasure(s, {{{0.1, 0.0}, 0.4}}), std::invalid_argument);
  EXPECT_THROW(DiscreteMeasure(s, {{{0.1, 0.0}, 1.5}, {{0.2, 0.0}, -0.5}}), std::invalid_argument);
}

TEST(DiscreteMeasure, CsvRoundTripIsLossless) {
  std::mt19937_64 rng(2);
  for (const auto& s : kSpaces) {
    const auto m = random_measure(s, rng, 8);
    std::stringstream io(to_csv(m));
    EXPECT_EQ(read_csv(io), m);
  }
}

TEST(W1, SpecExamples) {
  const auto I = PointSpace::unit_interval();
  EXPECT_EQ(w1_distance(DiscreteMeasure::dirac(I, {0.3, 0}), DiscreteMeasure::dirac(I, {0.3, 0})), 0.0);
  EXPECT_NEAR(w1_distance(DiscreteMeasure::dirac(I, {0.2, 0}), DiscreteMeasure::dirac(I, {0.7, 0})), 0.5, 1e-15);
  std::vector<Point> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back({i / 1000.0, 0.0});
  EXPECT_NEAR(w1_distance(DiscreteMeasure::uniform(I, grid), DiscreteMeasure::dirac(I, {0.5, 0})), 0.25, 1e-3);
  const auto C = PointSpace::circle();
  EXPECT_NEAR(w1_distance(DiscreteMeasure::dirac(C, {0.05, 0}), DiscreteMeasure::dirac(C, {0.95, 0})), 0.1, 1e-12);
  EXPECT_THROW(w1_distance(DiscreteMeasure::dirac(I, {0.1, 0}), DiscreteMeasure::dirac(C, {0.1, 0})),
               std::invalid_argument);
}

TEST(W1, MatchesUnitMassAssignmentOracle) {
  std::mt19937_64 rng(3);
  for (const auto& s : kSpaces) {
    for (int t = 0; t < 60; ++t) {
      const auto a = oracle::grid_weight_measure(s, rng, 5, 12);
      const auto b = oracle::grid_weight_measure(s, rng, 6, 12);
      EXPECT_NEAR(w1_distance(a, b), oracle::unit_mass_w1(a, b, 12), 1e-9) << to_string(s.kind());
    }
  }
}

TEST(W1, ClosedFormsMatchTransportSolver) {
  std::mt19937_64 rng(4);
  for (const auto& s : {PointSpace::unit_interval(), PointSpace::circle()}) {
    for (int t = 0; t < 300; ++t) {
      const auto a = random_measure(s, rng, 9);
      const auto b = random_measure(s, rng, 9);
      EXPECT_NEAR(w1_distance(a, b), w1_by_transport(a, b), 1e-9);
    }
  }
  // Interval measures embedded in the square on the line y = 0.
  for (int t = 0; t < 100; ++t) {
    const auto a = random_measure(PointSpace::unit_interval(), rng, 7);
    const auto b = random_measure(PointSpace::unit_interval(), rng, 7);
    std::vector<Atom> ea(a.atoms().begin(), a.atoms().end()), eb(b.atoms().begin(), b.atoms().end());
    const DiscreteMeasure sa(PointSpace::square(), ea), sb(PointSpace::square(), eb);
    EXPECT_NEAR(w1_distance(a, b), w1_distance(sa, sb), 1e-9);
  }
}

TEST(W1, IsAMetric) {
  std::mt19937_64 rng(5);
  for (const auto& s : kSpaces) {
    for (int t = 0; t < 250; ++t) {
      const auto a = random_measure(s, rng, 5), b = random_measure(s, rng, 5), c = random_measure(s, rng, 5);
      const double ab = w1_distance(a, b);
      EXPECT_NEAR(ab, w1_distance(b, a), 1e-12);
      EXPECT_LE(w1_distance(a, c), ab + w1_distance(b, c) + 1e-12);
      EXPECT_NEAR(w1_distance(a, a), 0.0, 1e-15);
      if (!(a == b)) {
        EXPECT_GT(ab, 0.0);
      }
    }
  }
}

TEST(W1, DualitySpotCheck) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    const auto& s = kSpaces[t % 4];
    const auto a = random_measure(s, rng, 6), b = random_measure(s, rng, 6);
    const double w = w1_distance(a, b);
    double best = 0.0;
    for (int k = 0; k < 500; ++k) {
      const auto f = oracle::random_lipschitz(s, rng);
      best = std::max(best, oracle::integrate(f, a) - oracle::integrate(f, b));
    }
    EXPECT_LE(best, w + 1e-9);
  }
}

TEST(W1, DistanceToLebesgueMatchesDiscretization) {
  std::mt19937_64 rng(7);
  const auto leb_i = DiscreteMeasure::lebesgue(PointSpace::unit_interval(), 20000);
  const auto leb_c = DiscreteMeasure::lebesgue(PointSpace::circle(), 20000);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_measure(PointSpace::unit_interval(), rng, 6);
    EXPECT_NEAR(w1_to_lebesgue(a), w1_distance(a, leb_i), 1e-4);
    const auto c = random_measure(PointSpace::circle(), rng, 6);
    EXPECT_NEAR(w1_to_lebesgue(c), w1_distance(c, leb_c), 1e-4);
  }
  EXPECT_NEAR(w1_to_lebesgue(DiscreteMeasure::dirac(PointSpace::unit_interval(), {0.5, 0})), 0.25, 1e-15);
  EXPECT_NEAR(w1_to_lebesgue(DiscreteMeasure::dirac(PointSpace::circle(), {0.3, 0})), 0.25, 1e-15);
}

TEST(Quantization, ReproducesSmallMeasures) {
  std::mt19937_64 rng(8);
  for (const auto& s : kSpaces) {
    const auto m = random_measure(s, rng, 5);
    const auto q = quantize_best(m, m.size() + 1);
    EXPECT_NEAR(q.error, 0.0, 1e-15);
    EXPECT_NEAR(w1_distance(q.approximation, m), 0.0, 1e-12);
  }
  EXPECT_THROW(quantize_best(DiscreteMeasure::dirac(PointSpace::circle(), {0.1, 0}), 0), std::invalid_argument);
}

TEST(Quantization, SingleAtomOfUniformGrid) {
  std::vector<Point> pts;
  for (int i = 0; i < 1000; ++i) pts.push_back({(2 * i + 1) / 2000.0, 0.0});
  const auto q = quantize_best(DiscreteMeasure::uniform(PointSpace::unit_interval(), pts), 1);
  EXPECT_NEAR(q.error, 0.25, 1e-3);
  EXPECT_TRUE(q.exact);
}

TEST(Quantization, QuarterOverNLaw) {
  const auto leb = DiscreteMeasure::lebesgue(PointSpace::unit_interval(), 4000);
  for (std::size_t n : {2u, 5u, 10u}) {
    const auto q = quantize_best(leb, n);
    EXPECT_NEAR(q.error, 1.0 / (4.0 * n), 2e-3);
    EXPECT_NEAR(w1_distance(leb, q.approximation), q.error, 1e-12);
  }
  for (double eps : {0.1, 0.05, 0.025}) {
    const double law = std::ceil(1.0 / (4.0 * eps));
    EXPECT_LE(std::abs(static_cast<double>(quantization_number(leb, eps)) - law), 1.0);
  }
}

TEST(Quantization, MatchesExhaustiveSplitsOnSmallInputs) {
  // Every split of sorted points into contiguous groups, each served by
  // its best single point found by scanning all candidates.
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const auto m = random_measure(PointSpace::unit_interval(), rng, 8);
    const std::size_t n = m.size();
    for (std::size_t k = 1; k <= n; ++k) {
      double best = 1e300;
      for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) + 1 != k) continue;
        double cost = 0.0;
        std::size_t start = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == n - 1 || (mask & (1u << i))) {
            double g = 1e300;
            for (std::size_t c = start; c <= i; ++c) {
              double s = 0.0;
              for (std::size_t j = start; j <= i; ++j) s += m[j].weight * std::abs(m[j].point[0] - m[c].point[0]);
              g = std::min(g, s);
            }
            cost += g;
            start = i + 1;
          }
        }
        best = std::min(best, cost);
      }
      EXPECT_NEAR(quantize_best(m, k).error, best, 1e-12);
    }
  }
}

TEST(Quantization, Monotonicity) {
  std::mt19937_64 rng(10);
  for (const auto& s : kSpaces) {
    const auto m = random_measure(s, rng, 30);
    double prev = 1e300;
    for (std::size_t n = 1; n <= 8; ++n) {
      const double e = quantize_best(m, n).error;
      EXPECT_LE(e, prev + 1e-12);
      prev = e;
    }
    std::size_t prev_q = 0;
    for (double eps : {0.01, 0.02, 0.05, 0.1, 0.2, 0.5}) {
      const std::size_t q = quantization_number(m, eps);
      if (prev_q) {
        EXPECT_LE(q, prev_q);
      }
      prev_q = q;
    }
  }
}

TEST(Quantization, TrivialNumbers) {
  EXPECT_EQ(quantization_number(DiscreteMeasure::dirac(PointSpace::square(), {0.3, 0.4}), 0.01), 1u);
  const auto leb = DiscreteMeasure::lebesgue(PointSpace::unit_interval(), 1000);
  EXPECT_EQ(quantization_number(leb, 1.0), 1u);
  EXPECT_THROW(quantization_number(leb, 0.0), std::invalid_argument);
}

TEST(Covering, TrivialAtDiameter) {
  for (const auto& s : kSpaces) {
    const auto b = measure_space_covering_bounds(s, s.diameter() + 1e-9, 1000);
    EXPECT_EQ(b.lower, 1u);
    EXPECT_EQ(b.upper, 1.0);
  }
}

TEST(Covering, QuarterOnIntervalPacksFour) {
  const auto b = measure_space_covering_bounds(PointSpace::unit_interval(), 0.25, 50000);
  EXPECT_GE(b.lower, 4u);
  // The four witnesses are pairwise at least 0.5 apart.
  const auto I = PointSpace::unit_interval();
  const std::vector<DiscreteMeasure> w{DiscreteMeasure::dirac(I, {0, 0}), DiscreteMeasure::dirac(I, {0.5, 0}),
                                       DiscreteMeasure::dirac(I, {1, 0}),
                                       DiscreteMeasure(I, {{{0, 0}, 0.5}, {{1, 0}, 0.5}})};
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) EXPECT_GE(w1_distance(w[i], w[j]), 0.5 - 1e-15);
  }
}

TEST(Covering, BoundsOrderedAndMonotone) {
  for (const auto& s : {PointSpace::unit_interval(), PointSpace::circle(), PointSpace::square()}) {
    std::uint64_t prev_lower = 0;
    double prev_upper = 0.0;
    for (double eps : {0.5, 0.4, 0.3, 0.2, 0.15}) {
      const auto b = measure_space_covering_bounds(s, eps, 5000);
      EXPECT_LE(static_cast<double>(b.lower), b.upper);
      EXPECT_GE(b.lower, prev_lower);
      EXPECT_GE(b.upper, prev_upper);
      prev_lower = b.lower;
      prev_upper = b.upper;
    }
  }
}
