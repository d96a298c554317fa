// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Runtime limits are part of each criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "emlab/emergence.hpp"
#include "emlab/entropy.hpp"
#include "emlab/experiments.hpp"
#include "emlab/kmedoids.hpp"
#include "emlab/measure_covering.hpp"
#include "emlab/orbit.hpp"
#include "emlab/parallel.hpp"
#include "emlab/periodic.hpp"
#include "emlab/quantization.hpp"
#include "emlab/scaling.hpp"
#include "emlab/transport.hpp"
#include "oracles.hpp"

using namespace emlab;
namespace fs = std::filesystem;

namespace {

const double kLog2 = std::numbers::ln2;
const double kCat = std::log((3.0 + std::sqrt(5.0)) / 2.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

struct Catalog {
  std::string key;
  DynamicalSystem system;
  std::vector<double> eps_grid;
  std::vector<std::size_t> n_grid;
  std::size_t sample;
  EntropyFit fit;
};

std::vector<Catalog> catalog() {
  const std::vector<std::size_t> n10{2, 3, 4, 5, 6, 7, 8, 9, 10};
  const std::vector<std::size_t> n6{2, 3, 4, 5, 6};
  const auto lin = EntropyFit::linear;
  return {
      {"identity", DynamicalSystem::identity(), {0.1, 0.05}, n10, 1u << 16, lin},
      {"mul_2", DynamicalSystem::mul(2), {0.1, 0.05}, n10, 1u << 16, lin},
      {"mul_3", DynamicalSystem::mul(3), {0.1, 0.05}, n6, 1u << 16, lin},
      {"rotation", DynamicalSystem::rotation(kGoldenRotation), {0.1, 0.05}, n10, 1u << 16, lin},
      {"tent", DynamicalSystem::tent(), {0.1, 0.05}, n10, 1u << 16, lin},
      {"logistic", DynamicalSystem::logistic(4.0), {0.1, 0.05}, n10, 1u << 16, lin},
      {"cat_map", DynamicalSystem::cat_map(), {0.2, 0.1}, {2, 3, 4, 5}, 1u << 18, lin},
      {"standard_map", DynamicalSystem::standard_map(1.2), {0.2, 0.1}, {4, 6, 8, 10, 12, 14, 18, 22}, 1u << 17,
       EntropyFit::with_log_term},
      {"product", DynamicalSystem::product(DynamicalSystem::mul(2), DynamicalSystem::rotation(kGoldenRotation)),
       {0.2, 0.1}, n6, 1u << 17, lin},
  };
}

// 1. Exact W1 against exhaustive unit-mass assignment.
Outcome w1_oracle() {
  std::mt19937_64 rng(2024);
  const PointSpace spaces[] = {PointSpace::unit_interval(), PointSpace::circle(), PointSpace::square(),
                               PointSpace::torus2()};
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const auto& s = spaces[t % 4];
    const auto a = oracle::grid_weight_measure(s, rng, 6, 12);
    const auto b = oracle::grid_weight_measure(s, rng, 6, 12);
    worst = std::max(worst, std::abs(w1_distance(a, b) - oracle::unit_mass_w1(a, b, 12)));
  }
  return {worst <= 1e-9, "500 pairs, max deviation " + num(worst)};
}

// 2. Quantization number of Lebesgue on [0,1].
Outcome quantization_law() {
  const auto leb = DiscreteMeasure::lebesgue(PointSpace::unit_interval(), 10000);
  bool ok = true;
  std::string d;
  for (double eps : {0.1, 0.05, 0.025}) {
    const auto q = quantization_number(leb, eps);
    const double law = std::ceil(1.0 / (4.0 * eps));
    ok = ok && std::abs(static_cast<double>(q) - law) <= 1.0;
    d += "Q(" + num(eps) + ")=" + std::to_string(q) + " law " + num(law) + "; ";
  }
  return {ok, d};
}

// 3. Ergodic Lebesgue for x -> 2x.
Outcome ergodic_emergence() {
  const auto cloud = sample_cloud(DynamicalSystem::mul(2), 100, 100000, 1);
  const auto p = metric_emergence(cloud, 0.05);
  return {p.n_upper == 1 && p.mean_residual < 0.05,
          "N_upper=" + std::to_string(p.n_upper) + " mean residual " + num(p.mean_residual)};
}

// 4. Identity emergence exponent on [0,1] and the square.
Outcome identity_order() {
  const std::vector<double> grid{0.2, 0.1, 0.05, 0.025};
  auto slope = [&](const EmpiricalCloud& c) {
    std::vector<ScalePoint> pts;
    for (const auto& p : emergence_curve(c, grid).points) pts.push_back({p.eps, static_cast<double>(p.n_upper)});
    return power_law_fit(pts).slope;
  };
  const double si = slope(sample_cloud(DynamicalSystem::identity(), 500, 1, 1, {Sampler::lattice}));
  const double ss =
      slope(sample_cloud(DynamicalSystem::identity(PointSpace::square()), 48 * 48, 1, 1, {Sampler::lattice}));
  return {std::abs(si - 1.0) <= 0.2 && std::abs(ss - 2.0) <= 0.3,
          "interval slope " + num(si) + ", square slope " + num(ss)};
}

// 5. Covering order of the measure space of [0,1].
Outcome covering_order() {
  std::vector<ScalePoint> pts;
  bool ordered = true;
  for (double eps : {0.4, 0.3, 0.2, 0.15}) {
    const auto b = measure_space_covering_bounds(PointSpace::unit_interval(), eps, 20000);
    ordered = ordered && static_cast<double>(b.lower) <= b.upper;
    pts.push_back({eps, b.log_upper});
  }
  const auto o = order_of_log(pts);
  return {ordered && o.slope >= 0.6 && o.slope <= 1.4,
          "log log slope " + num(o.slope) + (ordered ? ", lower <= upper" : ", lower > upper somewhere")};
}

// 6. Entropy suite.
Outcome entropy_suite() {
  std::string d, failures;
  double top_m2 = 0, top_rot = 1, top_cat = 0, katok_m2 = 0;
  bool variational = true;
  for (const auto& c : catalog()) {
    const double ht = topological_entropy(c.system, c.eps_grid, c.n_grid, c.sample, c.fit).value;
    const double hk =
        katok_entropy(c.system, Sampler::uniform, c.eps_grid.back(), 0.1, c.n_grid, c.sample, 1, c.fit).value;
    if (!(hk <= ht + 0.07)) {
      variational = false;
      failures += c.key + " ";
    }
    if (c.key == "mul_2") {
      top_m2 = ht;
      katok_m2 = hk;
    }
    if (c.key == "rotation") top_rot = ht;
    if (c.key == "cat_map") top_cat = ht;
  }
  const bool ok = std::abs(top_m2 - kLog2) <= 0.05 && top_rot <= 0.02 && std::abs(top_cat - kCat) <= 0.1 &&
                  std::abs(katok_m2 - kLog2) <= 0.07 && variational;
  d = "h_top mul_2 " + num(top_m2) + ", rotation " + num(top_rot) + ", cat " + num(top_cat) + "; h_katok mul_2 " +
      num(katok_m2) + "; variational " + (variational ? "ok" : "fails on " + failures);
  return {ok, d};
}

// 7. Lyapunov exponents and the Ruelle inequality.
Outcome lyapunov_ruelle() {
  const auto l2 = lyapunov(DynamicalSystem::mul(2), {0.1, 0}, 1000000);
  const auto lc = lyapunov(DynamicalSystem::cat_map(), {0.1, 0.2}, 1000000);
  const auto ll = lyapunov(DynamicalSystem::logistic(4.0), {0.1234567, 0}, 1000000);
  const bool exps = l2.exponents[0] == kLog2 && std::abs(lc.exponents[0] - kCat) <= 1e-6 &&
                    std::abs(lc.exponents[1] + kCat) <= 1e-6 && std::abs(ll.exponents[0] - kLog2) <= 5e-3;
  bool ruelle = true;
  std::string failures;
  for (const auto& c : catalog()) {
    RuelleOptions o;
    o.eps = c.eps_grid.back();
    o.n_grid = c.n_grid;
    o.entropy_sample = c.sample;
    if (c.key == "standard_map") o.lyapunov_starts = 64;
    const auto r = ruelle_check(c.system, o);
    if (!r.passed()) {
      ruelle = false;
      failures += c.key + "(" + num(r.entropy) + "," + num(r.sum_positive) + "," + num(r.derivative_bound) + ") ";
    }
  }
  return {exps && ruelle, "mul_2 " + num(l2.exponents[0], 17) + ", cat " + num(lc.exponents[0], 10) + "/" +
                              num(lc.exponents[1], 10) + ", logistic " + num(ll.exponents[0]) + "; Ruelle " +
                              (ruelle ? "holds on all 9 systems" : "fails on " + failures)};
}

// 8. Periodic points of x -> 2x.
Outcome periodic_points_check() {
  const auto sys = DynamicalSystem::mul(2);
  bool counts = true, decreasing = true;
  double prev = 1e9, w16 = 1.0, rate = 0.0;
  for (int n = 1; n <= 16; ++n) {
    const auto pp = periodic_points(sys, n);
    counts = counts && pp.fixed_point_count == (std::size_t{1} << n) - 1;
    const double w = w1_to_lebesgue(pp.measure(sys.space()));
    if (n >= 7) decreasing = decreasing && w < prev;
    prev = w;
    if (n == 16) {
      w16 = w;
      rate = std::log(static_cast<double>(pp.fixed_point_count)) / n;
    }
  }
  return {counts && decreasing && w16 < 0.01 && std::abs(rate - kLog2) <= 0.01,
          std::string("counts ") + (counts ? "2^n-1" : "wrong") + ", rate " + num(rate) + ", w1 decreasing " +
              (decreasing ? "yes" : "no") + ", w1(16) " + num(w16)};
}

// 9. h = lambda * d for x -> 2x with Lebesgue.
Outcome entropy_formula() {
  const auto sys = DynamicalSystem::mul(2);
  const std::vector<std::size_t> n{2, 3, 4, 5, 6, 7, 8, 9, 10};
  const double h = katok_entropy(sys, Sampler::uniform, 0.05, 0.1, n, 1u << 16, 1).value;
  const double lambda = lyapunov(sys, {0.1, 0}, 1000).exponents[0];
  const auto orb = sample_orbit(sys, Sampler::uniform, 1, 0, 1, 100000);
  const double dim =
      local_dimension(DiscreteMeasure::uniform(sys.space(), orb.points), std::vector<double>{0.02, 0.01, 0.005, 0.0025})
          .value;
  const double gap = std::abs(h - lambda * dim);
  return {gap <= 0.1, "h " + num(h) + ", lambda " + num(lambda) + ", d " + num(dim) + ", gap " + num(gap)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

// 10. Every experiment twice with the same seed, one and four workers.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("emlab_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::size_t files = 0;
  std::string mismatches;
  for (const auto& e : experiment_catalog()) {
    set_thread_limit(1);
    const auto a = run_experiment(e.name, Config{}, 1, root / "serial");
    set_thread_limit(4);
    const auto b = run_experiment(e.name, Config{}, 1, root / "parallel");
    set_thread_limit(0);
    for (std::size_t i = 0; i < a.outputs.size(); ++i) {
      ++files;
      const auto& f = a.outputs[i].file;
      if (i >= b.outputs.size() || slurp(root / "serial" / f) != slurp(root / "parallel" / f)) mismatches += f + " ";
    }
    if (a.outputs.size() != b.outputs.size()) mismatches += e.name + "(file count) ";
  }
  fs::remove_all(root);
  return {mismatches.empty(), std::to_string(files) + " data files compared" +
                                  (mismatches.empty() ? ", all identical" : "; differ: " + mismatches)};
}

// 11. Greedy medoid scan against exhaustive search.
Outcome optimizer_oracle() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const PointSpace spaces[] = {PointSpace::unit_interval(), PointSpace::circle(), PointSpace::square(),
                               PointSpace::torus2()};
  std::size_t below = 0, above = 0, equal = 0;
  for (int t = 0; t < 200; ++t) {
    const auto& s = spaces[t % 4];
    const std::size_t m = 2 + rng() % 11;
    std::vector<DiscreteMeasure> members;
    for (std::size_t i = 0; i < m; ++i) members.push_back(oracle::grid_weight_measure(s, rng, 3, 6));
    const auto d = pairwise_w1(members);
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) mean += d(i, j);
    }
    mean /= static_cast<double>(m * m);
    const std::vector<double> grid{mean, mean / 2, mean / 4};
    MedoidScan scan(d, grid);
    for (double eps : grid) {
      const auto exact = exact_center_count(d, eps);
      const auto greedy = scan.smallest_meeting(eps);
      if (greedy < exact) ++below;
      else if (greedy > exact + 1) ++above;
      else if (greedy == exact) ++equal;
    }
  }
  return {below == 0 && above == 0, "600 scales: " + std::to_string(equal) + " exact, " + std::to_string(below) +
                                        " below, " + std::to_string(above) + " more than +1"};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "W1 oracle equivalence", 10, w1_oracle},
      {2, "quantization law", 30, quantization_law},
      {3, "ergodic emergence", 120, ergodic_emergence},
      {4, "identity emergence order", 300, identity_order},
      {5, "covering order of measure space", 600, covering_order},
      {6, "entropy suite", 600, entropy_suite},
      {7, "Lyapunov exponents and Ruelle check", 120, lyapunov_ruelle},
      {8, "periodic points", 1e9, periodic_points_check},
      {9, "1D entropy formula", 1e9, entropy_formula},
      {10, "determinism", 1e9, determinism},
      {11, "emergence optimizer oracle", 1e9, optimizer_oracle},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt <= c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s  %2d %-36s %7.1fs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, dt, o.detail.c_str(),
                in_time ? "" : "  (over time limit)");
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
