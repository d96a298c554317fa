#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "emlab/scaling.hpp"

using namespace emlab;

TEST(FitLine, ExactLine) {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.slope_stderr, 0.0, 1e-14);
  EXPECT_THROW(fit_line(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
  EXPECT_THROW(fit_line(std::vector<double>{1, 1}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(OrderOf, DoublyExponentialIsExact) {
  for (double a : {0.5, 1.0, 2.0}) {
    std::vector<ScalePoint> s;
    for (int k = 1; k <= 5; ++k) {
      const double eps = std::ldexp(1.0, -k);
      s.push_back({eps, std::exp(std::pow(eps, -a))});
    }
    const auto o = order_of(s);
    EXPECT_NEAR(o.slope, a, 1e-6);
    EXPECT_TRUE(o.ok());
    EXPECT_GE(o.stderr, 0.0);
  }
}

TEST(OrderOf, LogSamplesAgree) {
  std::vector<ScalePoint> s, logs;
  for (int k = 1; k <= 6; ++k) {
    const double eps = std::ldexp(1.0, -k);
    s.push_back({eps, std::exp(std::pow(eps, -1.5))});
    logs.push_back({eps, std::pow(eps, -1.5)});
  }
  EXPECT_NEAR(order_of(s).slope, order_of_log(logs).slope, 1e-9);
  // Far beyond double range in phi itself.
  std::vector<ScalePoint> huge;
  for (int k = 8; k <= 12; ++k) huge.push_back({std::ldexp(1.0, -k), std::pow(2.0, 2.0 * k)});
  EXPECT_NEAR(order_of_log(huge).slope, 2.0, 1e-9);
}

TEST(OrderOf, PolynomialTendsToZero) {
  double previous = 1e9;
  for (int top : {8, 16, 32, 64}) {
    std::vector<ScalePoint> s;
    for (int k = top / 2; k <= top; ++k) {
      const double eps = std::ldexp(1.0, -k);
      s.push_back({eps, 1.0 / (4.0 * eps)});
    }
    const double slope = order_of(s).slope;
    EXPECT_LT(slope, previous);
    previous = slope;
  }
  EXPECT_LT(previous, 0.05);
}

TEST(OrderOf, ConstantAndSparseInputsAreFlagged) {
  std::vector<ScalePoint> c;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) c.push_back({eps, 5.0});
  const auto o = order_of(c);
  EXPECT_NEAR(o.slope, 0.0, 1e-12);
  EXPECT_TRUE(o.has_flag("constant_values"));

  std::vector<ScalePoint> few{{0.4, 10.0}, {0.2, 0.5}, {0.1, 1.0}, {0.05, 20.0}};
  const auto f = order_of(few);
  EXPECT_TRUE(f.has_flag("dropped_scales"));
  EXPECT_TRUE(f.has_flag("too_few_scales"));
  EXPECT_TRUE(std::isnan(f.slope));
  EXPECT_EQ(f.usable_scale_count, 2u);

  std::vector<ScalePoint> up{{0.1, 10.0}, {0.2, 20.0}, {0.4, 40.0}};
  EXPECT_TRUE(order_of(up).has_flag("eps_not_decreasing"));
}

TEST(OrderOf, QuotientsReported) {
  std::vector<ScalePoint> s{{0.5, 100.0}, {0.25, 1000.0}, {0.125, 1e5}};
  const auto o = order_of(s);
  ASSERT_EQ(o.quotients.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(o.quotients[i], std::log(std::log(s[i].value)) / -std::log(s[i].eps), 1e-14);
  }
}

TEST(OrderOf, RescalingInvariance) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  for (int t = 0; t < 50; ++t) {
    const double a = 0.3 + 2.0 * (rng() % 100) / 100.0;
    std::vector<ScalePoint> s1, s2;
    for (int k = 1; k <= 8; ++k) {
      const double eps = std::ldexp(1.0, -k);
      const double n = noise(rng);
      s1.push_back({eps, std::exp(std::exp(n) * std::pow(eps, -a))});
      s2.push_back({3.0 * eps, std::exp(std::exp(n) * std::pow(eps, -a))});
    }
    const auto o1 = order_of(s1), o2 = order_of(s2);
    EXPECT_NEAR(o1.slope, o2.slope, 2.0 * std::max(o1.stderr, o2.stderr) + 1e-12);
  }
}

TEST(OrderOf, MonotoneInPhi) {
  // exp(C eps^-a) is pointwise increasing in C and a; the slope must not
  // drop by more than 2 stderr along either direction.
  auto family = [](double c, double a) {
    std::vector<ScalePoint> s;
    for (int k = 1; k <= 6; ++k) {
      const double eps = std::ldexp(1.0, -k);
      s.push_back({eps, std::exp(c * std::pow(eps, -a))});
    }
    return order_of(s);
  };
  for (double a : {0.5, 1.0, 1.5}) {
    for (double c : {1.0, 2.0, 5.0}) {
      const auto base = family(c, a);
      for (const auto& bigger : {family(2.0 * c, a), family(c, a + 0.25)}) {
        EXPECT_GE(bigger.slope, base.slope - 2.0 * std::max(base.stderr, bigger.stderr));
      }
    }
  }
}

TEST(OrderOf, PositiveOrderDivergesAgainstPolynomialScale) {
  std::vector<double> ratios;
  for (int k = 1; k <= 10; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const double log_phi = std::pow(eps, -0.5);
    ratios.push_back(log_phi / -std::log(eps));
  }
  for (std::size_t i = 3; i < ratios.size(); ++i) EXPECT_GT(ratios[i], ratios[i - 1]);
}

TEST(PowerLaw, Slope) {
  std::vector<ScalePoint> s;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) s.push_back({eps, 3.0 / (eps * eps)});
  EXPECT_NEAR(power_law_fit(s).slope, 2.0, 1e-12);
}

TEST(JoinFlags, Separator) {
  EXPECT_EQ(join_flags({}), "");
  EXPECT_EQ(join_flags({"a", "b"}), "a;b");
}
