#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "emlab/entropy.hpp"
#include "emlab/orbit.hpp"

using namespace emlab;

namespace {
const double kLog2 = std::numbers::ln2;
const double kCat = std::log((3.0 + std::sqrt(5.0)) / 2.0);
}  // namespace

TEST(Bowen, Examples) {
  const auto m2 = DynamicalSystem::mul(2);
  EXPECT_DOUBLE_EQ(bowen_distance(m2, {0.1, 0}, {0.3, 0}, 1), 0.2);
  const auto id = DynamicalSystem::identity();
  EXPECT_DOUBLE_EQ(bowen_distance(id, {0.1, 0}, {0.7, 0}, 50), 0.6);
  EXPECT_DOUBLE_EQ(bowen_distance(m2, {0.0, 0}, {std::ldexp(1.0, -10), 0}, 8), 0.125);
}

TEST(Bowen, MetricAndMonotoneInN) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& sys : {DynamicalSystem::tent(), DynamicalSystem::cat_map(), DynamicalSystem::standard_map(1.2)}) {
    for (int t = 0; t < 200; ++t) {
      const Point x{u(rng), u(rng)}, y{u(rng), u(rng)}, z{u(rng), u(rng)};
      auto fix = [&](Point p) { return sys.dimension() == 2 ? p : Point{p[0], 0.0}; };
      const std::size_t n = 1 + rng() % 12;
      const double xy = bowen_distance(sys, fix(x), fix(y), n);
      EXPECT_DOUBLE_EQ(xy, bowen_distance(sys, fix(y), fix(x), n));
      EXPECT_LE(bowen_distance(sys, fix(x), fix(z), n), xy + bowen_distance(sys, fix(y), fix(z), n) + 1e-12);
      EXPECT_LE(xy, bowen_distance(sys, fix(x), fix(y), n + 1));
    }
  }
}

TEST(Cover, GreedyCoverIsACoverAndNests) {
  const auto sys = DynamicalSystem::tent();
  const auto tr = trajectories_from_sampler(sys, Sampler::uniform, 3, 2000, 6);
  for (std::size_t n : {1u, 3u, 6u}) {
    const auto c = greedy_bowen_cover(tr, n, 0.1);
    std::size_t covered = 0;
    for (auto b : c.ball_sizes) covered += b;
    EXPECT_EQ(covered, tr.count);
    EXPECT_EQ(c.centers, c.ball_sizes.size());
    // Counts at eps/2 bound counts at eps.
    EXPECT_LE(c.centers, greedy_bowen_cover(tr, n, 0.05).centers);
    if (n > 1) {
      EXPECT_GE(c.centers, greedy_bowen_cover(tr, n - 1, 0.1).centers);
    }
  }
}

TEST(Cover, MatchesBruteForceGreedy) {
  const auto sys = DynamicalSystem::mul(2);
  const auto tr = trajectories_from_sampler(sys, Sampler::uniform, 4, 300, 5);
  const double eps = 0.07;
  std::vector<bool> covered(tr.count, false);
  std::size_t centers = 0;
  for (std::size_t i = 0; i < tr.count; ++i) {
    if (covered[i]) continue;
    ++centers;
    for (std::size_t j = 0; j < tr.count; ++j) {
      double d = 0.0;
      for (std::size_t t = 0; t < 5; ++t) d = std::max(d, tr.space.distance(tr.at(i, t), tr.at(j, t)));
      if (d < eps) covered[j] = true;
    }
  }
  EXPECT_EQ(greedy_bowen_cover(tr, 5, eps).centers, centers);
}

TEST(TopologicalEntropy, Doubling) {
  const std::vector<double> eps{0.1, 0.05};
  const std::vector<std::size_t> n{2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto e = topological_entropy(DynamicalSystem::mul(2), eps, n, 1u << 16);
  EXPECT_NEAR(e.value, kLog2, 0.05);
  EXPECT_GE(e.value, 0.0);
  EXPECT_LE(e.value, std::log(2.0) + 0.1);
  for (std::size_t i = 1; i < e.log_counts.size(); ++i) EXPECT_GE(e.log_counts[i], e.log_counts[i - 1]);
  EXPECT_EQ(e.kind, EntropyKind::topological);
}

TEST(TopologicalEntropy, IsometriesHaveNone) {
  const std::vector<double> eps{0.1, 0.05};
  const std::vector<std::size_t> n{2, 4, 6, 8, 10};
  EXPECT_LE(topological_entropy(DynamicalSystem::rotation(kGoldenRotation), eps, n).value, 0.02);
  EXPECT_LE(topological_entropy(DynamicalSystem::identity(), eps, n).value, 0.02);
}

TEST(TopologicalEntropy, CatMap) {
  const std::vector<double> eps{0.2, 0.1};
  const std::vector<std::size_t> n{2, 3, 4, 5};
  EXPECT_NEAR(topological_entropy(DynamicalSystem::cat_map(), eps, n, 1u << 18).value, kCat, 0.1);
}

TEST(TopologicalEntropy, RejectsBadGrids) {
  const std::vector<double> eps{0.1};
  const std::vector<std::size_t> bad{3, 2};
  EXPECT_THROW(topological_entropy(DynamicalSystem::mul(2), eps, bad), std::invalid_argument);
}

TEST(KatokEntropy, Examples) {
  const std::vector<std::size_t> n{2, 3, 4, 5, 6, 7, 8, 9, 10};
  EXPECT_NEAR(katok_entropy(DynamicalSystem::identity(), Sampler::uniform, 0.05, 0.1, n).value, 0.0, 0.02);
  EXPECT_NEAR(katok_entropy(DynamicalSystem::rotation(kGoldenRotation), Sampler::uniform, 0.05, 0.1, n).value, 0.0,
              0.02);
  EXPECT_NEAR(katok_entropy(DynamicalSystem::mul(2), Sampler::uniform, 0.05, 0.1, n, 1u << 16).value, kLog2, 0.07);
}

TEST(KatokEntropy, FlagsNonErgodicReference) {
  const std::vector<std::size_t> n{2, 3, 4, 5, 6};
  const auto e = katok_entropy(DynamicalSystem::mul(2), Sampler::bernoulli_mixture, 0.05, 0.1, n, 4096);
  EXPECT_NE(std::find(e.flags.begin(), e.flags.end(), "reference_not_ergodic"), e.flags.end());
}

TEST(EntropyJson, CarriesContractFields) {
  const std::vector<double> eps{0.1};
  const std::vector<std::size_t> n{2, 3, 4};
  const auto j = nlohmann::json::parse(to_json(topological_entropy(DynamicalSystem::mul(2), eps, n)));
  for (const char* key : {"system", "kind", "eps", "n_grid", "counts", "slope", "residual", "flags"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["kind"], "topological");
}

TEST(Lyapunov, ClosedForms) {
  const auto l2 = lyapunov(DynamicalSystem::mul(2), {0.1, 0}, 1000);
  EXPECT_DOUBLE_EQ(l2.exponents[0], kLog2);
  EXPECT_DOUBLE_EQ(l2.sum_positive, kLog2);
  const auto lc = lyapunov(DynamicalSystem::cat_map(), {0.1, 0.2}, 1000000);
  ASSERT_EQ(lc.exponents.size(), 2u);
  EXPECT_NEAR(lc.exponents[0], kCat, 1e-6);
  EXPECT_NEAR(lc.exponents[1], -kCat, 1e-6);
  EXPECT_NEAR(lc.sum_positive, kCat, 1e-6);
  const auto lr = lyapunov(DynamicalSystem::rotation(0.3), {0.1, 0}, 1000);
  EXPECT_EQ(lr.sum_positive, 0.0);
  EXPECT_THROW(lyapunov(DynamicalSystem::mul(2), {0.1, 0}, 0), std::invalid_argument);
}

TEST(Lyapunov, LogisticThroughConjugacy) {
  const auto l = lyapunov(DynamicalSystem::logistic(4.0), {0.1234567, 0}, 1000000);
  EXPECT_NEAR(l.exponents[0], kLog2, 5e-3);
}

TEST(Lyapunov, SortedAndSumPositive) {
  const auto l = lyapunov(DynamicalSystem::standard_map(1.2), {0.3, 0.6}, 20000);
  ASSERT_EQ(l.exponents.size(), 2u);
  EXPECT_GE(l.exponents[0], l.exponents[1]);
  double s = 0.0;
  for (double e : l.exponents) s += std::max(e, 0.0);
  EXPECT_DOUBLE_EQ(s, l.sum_positive);
  // Area preservation: exponents sum to zero.
  EXPECT_NEAR(l.exponents[0] + l.exponents[1], 0.0, 1e-6);
}

TEST(Ruelle, DoublingEqualityCase) {
  RuelleOptions o;
  o.n_grid = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto r = ruelle_check(DynamicalSystem::mul(2), o);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.entropy, kLog2, 0.07);
  EXPECT_NEAR(r.sum_positive, kLog2, 1e-12);
  EXPECT_NEAR(r.derivative_bound, kLog2, 1e-12);
}

TEST(Ruelle, RotationAndCat) {
  RuelleOptions o;
  const auto r = ruelle_check(DynamicalSystem::rotation(kGoldenRotation), o);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.entropy, 0.0, 0.02);
  EXPECT_EQ(r.sum_positive, 0.0);
  EXPECT_EQ(r.derivative_bound, 0.0);

  RuelleOptions c;
  c.eps = 0.1;
  c.n_grid = {2, 3, 4, 5};
  c.entropy_sample = 1u << 17;
  const auto rc = ruelle_check(DynamicalSystem::cat_map(), c);
  EXPECT_TRUE(rc.passed()) << rc.entropy << " " << rc.sum_positive << " " << rc.derivative_bound;
  // Averaged over short orbits (2e4 steps), so the 1/n transient remains.
  EXPECT_NEAR(rc.sum_positive, kCat, 1e-4);
}

TEST(LocalDimension, Examples) {
  const std::vector<double> grid{0.02, 0.01, 0.005, 0.0025};
  const auto leb = DiscreteMeasure::lebesgue(PointSpace::unit_interval(), 10000);
  EXPECT_NEAR(local_dimension(leb, grid).value, 1.0, 0.05);
  EXPECT_NEAR(local_dimension(DiscreteMeasure::dirac(PointSpace::unit_interval(), {0.4, 0}), grid).value, 0.0, 1e-12);
  const auto lebsq = DiscreteMeasure::lebesgue(PointSpace::square(), 40000);
  EXPECT_NEAR(local_dimension(lebsq, std::vector<double>{0.08, 0.04, 0.02}).value, 2.0, 0.1);
}

TEST(LocalDimension, CantorOrbit) {
  const auto sys = DynamicalSystem::mul(3);
  const auto orb = sample_orbit(sys, Sampler::cantor, 5, 0, 1, 200000);
  const auto mu = DiscreteMeasure::uniform(sys.space(), orb.points);
  const std::vector<double> grid{0.03, 0.01, 0.0033, 0.0011};
  EXPECT_NEAR(local_dimension(mu, grid).value, std::log(2.0) / std::log(3.0), 0.1);
}
