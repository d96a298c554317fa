#include "emlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "emlab/emergence.hpp"
#include "emlab/entropy.hpp"
#include "emlab/measure_covering.hpp"
#include "emlab/orbit.hpp"
#include "emlab/periodic.hpp"
#include "emlab/scaling.hpp"
#include "emlab/transport.hpp"

namespace emlab {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

// Reads parameters with defaults and records the values actually used.
class Params {
 public:
  explicit Params(const Config& config) : config_(config) {}

  double real(const std::string& key, double fallback) {
    const double v = config_.get_double(key, fallback);
    used_.set(key, num(v));
    return v;
  }
  std::size_t count(const std::string& key, std::size_t fallback) {
    const auto v = config_.get_u64(key, fallback);
    used_.set(key, std::to_string(v));
    return static_cast<std::size_t>(v);
  }
  std::vector<double> reals(const std::string& key, std::vector<double> fallback) {
    if (config_.has(key)) {
      fallback.clear();
      for (const auto& s : split_list(config_.get_string(key, ""))) fallback.push_back(std::stod(s));
    }
    std::string text;
    for (double v : fallback) text += (text.empty() ? "" : ",") + num(v);
    used_.set(key, text);
    return fallback;
  }

  const Config& used() const { return used_; }

 private:
  const Config& config_;
  Config used_;
};

class Csv {
 public:
  explicit Csv(const std::string& header) { text_ = header + "\n"; }

  template <typename... Fields>
  void row(const Fields&... fields) {
    std::string line;
    (append(line, fields), ...);
    line.back() = '\n';
    text_ += line;
  }

  const std::string& text() const { return text_; }

 private:
  static void append(std::string& line, double v) { line += num(v) + ","; }
  static void append(std::string& line, std::size_t v) { line += std::to_string(v) + ","; }
  static void append(std::string& line, int v) { line += std::to_string(v) + ","; }
  static void append(std::string& line, bool v) { line += v ? "1," : "0,"; }
  static void append(std::string& line, const std::string& v) { line += v + ","; }
  static void append(std::string& line, const char* v) { line += std::string(v) + ","; }

  std::string text_;
};

class Run {
 public:
  Run(const fs::path& out, ExperimentManifest& manifest, Params& params)
      : out_(out), manifest_(manifest), params_(params) {}

  Params& params() { return params_; }
  std::uint64_t seed() const { return manifest_.seed; }

  void write(const std::string& file, const std::string& bytes) {
    const fs::path path = out_ / file;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.close();
    if (!f) throw std::runtime_error("write failed: " + path.string());
    manifest_.outputs.push_back({file, bytes.size(), hex64(fnv1a64(bytes))});
  }

  void check(const std::string& name, bool passed, const std::string& detail) {
    manifest_.checks.push_back({name, passed, detail});
  }

 private:
  fs::path out_;
  ExperimentManifest& manifest_;
  Params& params_;
};

std::string curve_csv(const EmergenceCurve& curve) {
  std::ostringstream s;
  write_curve_csv(s, curve);
  return s.str();
}

// Two columns: -log eps, log N_upper.
std::string curve_dat(const EmergenceCurve& curve) {
  std::string text = "# -log(eps) log(N_upper)\n";
  for (const auto& p : curve.points) {
    text += num(-std::log(p.eps)) + " " + num(std::log(static_cast<double>(p.n_upper))) + "\n";
  }
  return text;
}

LineFit curve_fit(const EmergenceCurve& curve) {
  std::vector<ScalePoint> pts;
  for (const auto& p : curve.points) pts.push_back({p.eps, static_cast<double>(p.n_upper)});
  return power_law_fit(pts);
}

bool budgets_met(const EmergenceCurve& curve) {
  return std::all_of(curve.points.begin(), curve.points.end(),
                     [](const EmergencePoint& p) { return p.mean_residual < p.eps; });
}

// ---------------------------------------------------------------------------

void identity_order(Run& run) {
  auto& p = run.params();
  const auto grid = p.reals("eps_grid", {0.2, 0.1, 0.05, 0.025});
  const std::size_t members = p.count("interval.members", 500);
  const std::size_t side = p.count("square.side", 48);

  CloudOptions lattice;
  lattice.reference = Sampler::lattice;
  const auto interval = sample_cloud(DynamicalSystem::identity(), members, 1, run.seed(), lattice);
  const auto ci = emergence_curve(interval, grid);
  const auto square =
      sample_cloud(DynamicalSystem::identity(PointSpace::square()), side * side, 1, run.seed(), lattice);
  const auto cs = emergence_curve(square, grid);

  run.write("identity_order_interval.csv", curve_csv(ci));
  run.write("identity_order_square.csv", curve_csv(cs));
  run.write("identity_order_interval.dat", curve_dat(ci));
  run.write("identity_order_square.dat", curve_dat(cs));

  const LineFit fi = curve_fit(ci);
  const LineFit fs2 = curve_fit(cs);
  Csv fit("space,members,slope,intercept,slope_stderr");
  fit.row(std::string("unit_interval"), interval.size(), fi.slope, fi.intercept, fi.slope_stderr);
  fit.row(std::string("square"), square.size(), fs2.slope, fs2.intercept, fs2.slope_stderr);
  run.write("identity_order_fit.csv", fit.text());

  run.check("interval slope in [0.8, 1.2]", std::abs(fi.slope - 1.0) <= 0.2, "slope=" + num(fi.slope));
  run.check("square slope in [1.7, 2.3]", std::abs(fs2.slope - 2.0) <= 0.3, "slope=" + num(fs2.slope));
  bool law = true;
  std::string detail;
  for (const auto& pt : ci.points) {
    const double q = std::ceil(1.0 / (4.0 * pt.eps) - 1e-12);
    law = law && std::abs(static_cast<double>(pt.n_upper) - q) <= 1.0;
    detail += (detail.empty() ? "" : ";") + std::to_string(pt.n_upper) + "/" + num(q);
  }
  run.check("interval N_upper within 1 of ceil(1/(4 eps))", law, detail);
  run.check("mean residual below eps", budgets_met(ci) && budgets_met(cs), "");
}

void ergodic_doubling(Run& run) {
  auto& p = run.params();
  const std::size_t members = p.count("members", 100);
  const std::size_t horizon = p.count("horizon", 100000);
  const auto grid = p.reals("eps_grid", {0.05});
  const std::size_t mix_members = p.count("contrast.members", 60);
  const std::size_t mix_horizon = p.count("contrast.horizon", 2000);
  const auto mix_grid = p.reals("contrast.eps_grid", {0.2, 0.1, 0.05});

  const auto sys = DynamicalSystem::mul(2);
  const auto cloud = sample_cloud(sys, members, horizon, run.seed());
  const auto curve = emergence_curve(cloud, grid);
  run.write("ergodic_doubling.csv", curve_csv(curve));

  Csv starts("member,start,diagnostic");
  for (std::size_t i = 0; i < cloud.size(); ++i) starts.row(i, cloud.starts[i][0], cloud.diagnostics[i]);
  run.write("ergodic_doubling_members.csv", starts.text());

  CloudOptions mix;
  mix.reference = Sampler::bernoulli_mixture;
  const auto contrast = sample_cloud(sys, mix_members, mix_horizon, run.seed(), mix);
  const auto cc = emergence_curve(contrast, mix_grid);
  run.write("ergodic_doubling_contrast.csv", curve_csv(cc));
  run.write("ergodic_doubling_contrast.dat", curve_dat(cc));

  for (const auto& pt : curve.points) {
    if (std::abs(pt.eps - 0.05) < 1e-12) {
      run.check("E(0.05)=1", pt.n_upper == 1, "N_upper=" + std::to_string(pt.n_upper));
    }
  }
  run.check("mean residual below eps", budgets_met(curve) && budgets_met(cc), "");
}

struct EntropyCase {
  std::string key;
  DynamicalSystem system;
  std::vector<double> eps_grid;
  std::vector<std::size_t> n_grid;
  std::size_t sample;
  EntropyFit fit;
};

std::vector<EntropyCase> entropy_cases() {
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

void entropy_suite(Run& run) {
  auto& p = run.params();
  const double delta = p.real("katok.delta", 0.1);
  const std::size_t lyap_n = p.count("lyapunov.length", 1000000);
  const auto dim_grid = p.reals("dimension.eps_grid", {0.02, 0.01, 0.005, 0.0025});
  const std::size_t dim_n = p.count("dimension.horizon", 100000);

  Csv table("system,h_top,h_katok,sum_positive,derivative_bound,ruelle_passed,flags");
  json estimates = json::array();
  std::map<std::string, double> top, katok;
  std::string dat;
  bool variational = true, ruelle_all = true;
  std::string var_detail, ruelle_detail;

  for (const auto& c : entropy_cases()) {
    const auto ht = topological_entropy(c.system, c.eps_grid, c.n_grid, c.sample, c.fit);
    const auto hk = katok_entropy(c.system, Sampler::uniform, c.eps_grid.back(), delta, c.n_grid, c.sample,
                                  run.seed(), c.fit);
    RuelleOptions ro;
    ro.eps = c.eps_grid.back();
    ro.delta = delta;
    ro.n_grid = c.n_grid;
    ro.entropy_sample = c.sample;
    ro.seed = run.seed();
    if (c.key == "standard_map") ro.lyapunov_starts = 64;
    const auto rr = ruelle_check(c.system, ro);

    std::vector<std::string> flags;
    for (const auto& f : ht.flags) flags.push_back("top:" + f);
    for (const auto& f : hk.flags) flags.push_back("katok:" + f);
    table.row(c.key, ht.value, hk.value, rr.sum_positive, rr.derivative_bound, rr.passed(), join_flags(flags));
    estimates.push_back(json::parse(to_json(ht)));
    estimates.push_back(json::parse(to_json(hk)));
    top[c.key] = ht.value;
    katok[c.key] = hk.value;

    dat += "# " + c.key + ": n log(N_top) log(N_katok) at eps=" + num(ht.eps) + "\n";
    for (std::size_t i = 0; i < ht.n_grid.size(); ++i) {
      dat += num(static_cast<double>(ht.n_grid[i])) + " " + num(ht.log_counts[i]) + " " + num(hk.log_counts[i]) + "\n";
    }
    dat += "\n\n";

    if (!(hk.value <= ht.value + 0.07)) {
      variational = false;
      var_detail += c.key + ";";
    }
    if (!rr.passed()) {
      ruelle_all = false;
      ruelle_detail += c.key + ";";
    }
  }
  run.write("entropy_suite.csv", table.text());
  run.write("entropy_suite.json", estimates.dump(2) + "\n");
  run.write("entropy_suite.dat", dat);

  const double log2 = std::numbers::ln2;
  const double cat = std::log((3.0 + std::sqrt(5.0)) / 2.0);
  run.check("h_top(mul_2) = log 2 +- 0.05", std::abs(top["mul_2"] - log2) <= 0.05, num(top["mul_2"]));
  run.check("h_top(rotation) <= 0.02", top["rotation"] <= 0.02, num(top["rotation"]));
  run.check("h_top(cat_map) = log((3+sqrt5)/2) +- 0.1", std::abs(top["cat_map"] - cat) <= 0.1, num(top["cat_map"]));
  run.check("h_katok(mul_2) = log 2 +- 0.07", std::abs(katok["mul_2"] - log2) <= 0.07, num(katok["mul_2"]));
  run.check("h_katok <= h_top + 0.07 on all systems", variational, var_detail);
  run.check("ruelle inequality on all systems", ruelle_all, ruelle_detail);

  // Lyapunov exponents from one seeded start per map.
  Csv lyap("system,orbit_length,exponent_1,exponent_2,sum_positive");
  auto start_for = [&](const DynamicalSystem& s) { return sample_orbit(s, Sampler::uniform, run.seed(), 0, 1, 1).start; };
  const auto l2 = lyapunov(DynamicalSystem::mul(2), start_for(DynamicalSystem::mul(2)), lyap_n);
  const auto lc = lyapunov(DynamicalSystem::cat_map(), start_for(DynamicalSystem::cat_map()), lyap_n);
  const auto ll = lyapunov(DynamicalSystem::logistic(4.0), start_for(DynamicalSystem::logistic(4.0)), lyap_n);
  lyap.row(std::string("mul_2"), l2.orbit_length, l2.exponents[0], 0.0, l2.sum_positive);
  lyap.row(std::string("cat_map"), lc.orbit_length, lc.exponents[0], lc.exponents[1], lc.sum_positive);
  lyap.row(std::string("logistic"), ll.orbit_length, ll.exponents[0], 0.0, ll.sum_positive);
  run.write("entropy_suite_lyapunov.csv", lyap.text());
  run.check("lyapunov(mul_2) = log 2", std::abs(l2.exponents[0] - log2) <= 1e-12, num(l2.exponents[0]));
  run.check("lyapunov(cat_map) = +-log((3+sqrt5)/2) within 1e-6",
            std::abs(lc.exponents[0] - cat) <= 1e-6 && std::abs(lc.exponents[1] + cat) <= 1e-6,
            num(lc.exponents[0]) + ";" + num(lc.exponents[1]));
  run.check("lyapunov(logistic) = log 2 +- 5e-3", std::abs(ll.exponents[0] - log2) <= 5e-3, num(ll.exponents[0]));

  // Entropy formula in dimension one: h = lambda * local dimension.
  const auto sys = DynamicalSystem::mul(2);
  // Digit-stream start: a double start of x -> 2x is dyadic and collapses to 0.
  const auto orb = sample_orbit(sys, Sampler::uniform, run.seed(), 0, 1, dim_n);
  const auto mu = DiscreteMeasure::uniform(sys.space(), orb.points);
  const auto dim = local_dimension(mu, dim_grid, run.seed());
  const double gap = std::abs(katok["mul_2"] - l2.exponents[0] * dim.value);
  Csv formula("system,h_katok,lyapunov,local_dimension,gap");
  formula.row(std::string("mul_2"), katok["mul_2"], l2.exponents[0], dim.value, gap);
  run.write("entropy_suite_formula.csv", formula.text());
  run.check("|h - lambda d| <= 0.1 for mul_2", gap <= 0.1, "gap=" + num(gap));
}

void covering_measure_space(Run& run) {
  auto& p = run.params();
  const auto grid = p.reals("eps_grid", {0.4, 0.3, 0.2, 0.15});
  const std::size_t budget = p.count("budget", 20000);

  Csv table("space,eps,lower,upper,log_upper,truncated");
  Csv fit("space,slope,intercept,slope_stderr,flags");
  std::string dat;
  bool ordered = true;
  double interval_slope = std::nan("");
  for (auto space : {PointSpace::unit_interval(), PointSpace::circle(), PointSpace::square()}) {
    std::vector<ScalePoint> pts;
    const std::string name(to_string(space.kind()));
    dat += "# " + name + ": -log(eps) log(log(upper))\n";
    for (double eps : grid) {
      const auto b = measure_space_covering_bounds(space, eps, budget, run.seed());
      table.row(name, eps, static_cast<std::size_t>(b.lower), b.upper, b.log_upper, b.truncated);
      ordered = ordered && static_cast<double>(b.lower) <= b.upper;
      pts.push_back({eps, b.log_upper});
      if (b.log_upper > 0.0) dat += num(-std::log(eps)) + " " + num(std::log(b.log_upper)) + "\n";
    }
    dat += "\n\n";
    const auto o = order_of_log(pts);
    fit.row(name, o.slope, o.intercept, o.stderr, join_flags(o.flags));
    if (space.kind() == SpaceKind::unit_interval) interval_slope = o.slope;
  }
  run.write("covering_measure_space.csv", table.text());
  run.write("covering_measure_space_fit.csv", fit.text());
  run.write("covering_measure_space.dat", dat);
  run.check("interval log log upper slope in [0.6, 1.4]", interval_slope >= 0.6 && interval_slope <= 1.4,
            "slope=" + num(interval_slope));
  run.check("lower <= upper at every eps", ordered, "");
}

void topological_emergence_doubling(Run& run) {
  auto& p = run.params();
  const std::size_t max_period = p.count("max_period", 12);
  const auto grid = p.reals("eps_grid", {0.2, 0.1, 0.05, 0.025});
  const std::size_t mix_members = p.count("mixture.members", 60);
  const std::size_t mix_horizon = p.count("mixture.horizon", 2000);

  Csv table("system,eps,max_period,count,candidates");
  Csv packing("system,eps,orbit,period,smallest_point");
  bool monotone = true;
  std::map<double, std::size_t> mul2_count;
  for (const auto& sys : {DynamicalSystem::mul(2), DynamicalSystem::tent()}) {
    std::size_t previous = 0;
    for (double eps : grid) {
      const auto t = topological_emergence_lower(sys, static_cast<int>(max_period), eps);
      table.row(sys.name(), eps, max_period, t.count, t.candidates);
      for (std::size_t i = 0; i < t.packing.size(); ++i) {
        const auto& r = t.packing[i].points.front();
        packing.row(sys.name(), eps, i, t.packing[i].period(), std::to_string(r.num) + "/" + std::to_string(r.den));
      }
      if (t.count < previous) monotone = false;
      previous = t.count;
      if (sys.kind() == MapKind::mul) mul2_count[eps] = t.count;
    }
  }
  run.write("topological_emergence.csv", table.text());
  run.write("topological_emergence_packing.csv", packing.text());

  const auto sys = DynamicalSystem::mul(2);
  const auto single = topological_emergence_lower(sys, 1, 0.1);
  run.check("max_period=1 gives 1", single.count == 1, std::to_string(single.count));
  if (mul2_count.count(0.1)) {
    run.check("mul_2 count at eps=0.1 >= 3", mul2_count[0.1] >= 3, std::to_string(mul2_count[0.1]));
  }
  run.check("count non-decreasing as eps shrinks", monotone, "");

  // Metric emergence of an invariant (Bernoulli mixture) cloud at eps against
  // the periodic packing at eps/2.
  CloudOptions mix;
  mix.reference = Sampler::bernoulli_mixture;
  const auto cloud = sample_cloud(sys, mix_members, mix_horizon, run.seed(), mix);
  const auto curve = emergence_curve(cloud, grid);
  Csv cmp("eps,N_upper_mixture,packing_half_eps");
  bool consistent = true;
  for (const auto& pt : curve.points) {
    const auto half = topological_emergence_lower(sys, static_cast<int>(max_period), pt.eps / 2.0);
    cmp.row(pt.eps, pt.n_upper, half.count);
    consistent = consistent && pt.n_upper <= half.count;
  }
  run.write("topological_emergence_consistency.csv", cmp.text());
  run.check("mixture N_upper(eps) <= packing(eps/2)", consistent, "");
}

void periodic_equidistribution(Run& run) {
  auto& p = run.params();
  const std::size_t max_n = p.count("max_n", 16);
  if (max_n > 16 || max_n < 1) throw std::invalid_argument("max_n must lie in [1, 16]");

  Csv table("system,n,fixed_points,log_count_over_n,w1_to_uniform");
  std::string dat = "# n w1(mul_2) w1(tent)\n";
  std::vector<double> w_mul(max_n + 1), w_tent(max_n + 1);
  bool counts = true;
  double rate = 0.0;
  for (const auto& sys : {DynamicalSystem::mul(2), DynamicalSystem::tent()}) {
    for (std::size_t n = 1; n <= max_n; ++n) {
      const auto pp = periodic_points(sys, static_cast<int>(n));
      const double c = static_cast<double>(pp.fixed_point_count);
      const double w = w1_to_lebesgue(pp.measure(sys.space()));
      table.row(sys.name(), n, pp.fixed_point_count, std::log(c) / static_cast<double>(n), w);
      if (sys.kind() == MapKind::mul) {
        counts = counts && pp.fixed_point_count == (std::size_t{1} << n) - 1;
        w_mul[n] = w;
        rate = std::log(c) / static_cast<double>(n);
      } else {
        w_tent[n] = w;
      }
    }
  }
  for (std::size_t n = 1; n <= max_n; ++n) dat += std::to_string(n) + " " + num(w_mul[n]) + " " + num(w_tent[n]) + "\n";
  run.write("periodic_equidistribution.csv", table.text());
  run.write("periodic_equidistribution.dat", dat);

  run.check("Card Fix(f^n) = 2^n - 1 for mul_2", counts, "");
  run.check("(1/n) log count within 0.01 of log 2", std::abs(rate - std::numbers::ln2) <= 0.01, num(rate));
  bool decreasing = true;
  for (std::size_t n = 7; n <= max_n; ++n) decreasing = decreasing && w_mul[n] < w_mul[n - 1];
  if (max_n >= 7) run.check("w1 to uniform strictly decreasing for n >= 6", decreasing, "");
  if (max_n == 16) run.check("w1 to uniform < 0.01 at n = 16", w_mul[16] < 0.01, num(w_mul[16]));
}

void standard_map_survey(Run& run) {
  auto& p = run.params();
  const auto ks = p.reals("K_values", {0.6, 1.2, 2.5});
  const std::size_t members = p.count("members", 40);
  const std::size_t horizon = p.count("horizon", 2000);
  const std::size_t cells = p.count("bin_cells", 8);
  const auto grid = p.reals("eps_grid", {0.2, 0.14, 0.1, 0.07});

  Csv summary("K,members,horizon,convergence_diagnostic,slope,slope_stderr");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    CloudOptions o;
    o.bin_cells = cells;
    const auto cloud = sample_cloud(DynamicalSystem::standard_map(ks[i]), members, horizon, run.seed(), o);
    const auto curve = emergence_curve(cloud, grid);
    const std::string tag = "standard_map_survey_" + std::to_string(i);
    run.write(tag + ".csv", curve_csv(curve));
    run.write(tag + ".dat", curve_dat(curve));
    const LineFit f = curve_fit(curve);
    summary.row(ks[i], cloud.size(), horizon, cloud.convergence_diagnostic, f.slope, f.slope_stderr);
  }
  run.write("standard_map_survey.csv", summary.text());

  // Reference line of slope d/2 = 1 through the origin.
  std::string ref = "# -log(eps) (d/2)(-log(eps)), d = 2\n";
  for (double eps : grid) ref += num(-std::log(eps)) + " " + num(-std::log(eps)) + "\n";
  run.write("standard_map_survey_reference.dat", ref);
}

void local_order(Run& run) {
  auto& p = run.params();
  const auto grid = p.reals("eps_grid", {0.2, 0.1, 0.05, 0.025});
  const std::size_t members = p.count("members", 200);
  const std::size_t centers = p.count("centers", 20);
  const std::size_t mix_members = p.count("ergodic.members", 100);
  const std::size_t mix_horizon = p.count("ergodic.horizon", 20000);

  CloudOptions lattice;
  lattice.reference = Sampler::lattice;
  const auto cloud = sample_cloud(DynamicalSystem::identity(), members, 1, run.seed(), lattice);
  const DiscreteMeasure half = DiscreteMeasure::dirac(PointSpace::unit_interval(), {0.5, 0.0});

  Csv masses("case,eps,mass,direct_count_mass");
  for (double eps : grid) {
    std::size_t inside = 0;
    for (const auto& s : cloud.starts) inside += std::abs(s[0] - 0.5) < eps ? 1 : 0;
    const double direct = static_cast<double>(inside) / static_cast<double>(cloud.size());
    masses.row(std::string("identity_half"), eps, std::min(1.0, 2.0 * eps), direct);
  }
  const auto est = local_emergence_order(cloud, half, grid);

  const auto mul = DynamicalSystem::mul(2);
  const auto ergodic = sample_cloud(mul, mix_members, mix_horizon, run.seed());
  const DiscreteMeasure uniform = DiscreteMeasure::lebesgue(PointSpace::circle(), 4096);
  const auto est2 = local_emergence_order(ergodic, uniform, grid);

  Csv orders("case,slope,usable_scales,flags");
  orders.row(std::string("identity_half"), est.slope, est.usable_scale_count, join_flags(est.flags));
  orders.row(std::string("mul_2_uniform"), est2.slope, est2.usable_scale_count, join_flags(est2.flags));
  run.write("local_order_masses.csv", masses.text());
  run.write("local_order.csv", orders.text());

  const auto d = pairwise_w1(cloud.members);
  const auto curve = emergence_curve(d, grid);
  const auto probe = local_order_probe(d, grid, curve, centers);
  Csv side("mean_local_order,centers_used,centers_flagged,global_order,global_flags");
  side.row(probe.mean_local_order, probe.centers_used, probe.centers_flagged, probe.global.slope,
           join_flags(probe.global.flags));
  run.write("local_order_probe.csv", side.text());

  run.check("mul_2 cloud at uniform center flagged degenerate", est2.has_flag("degenerate"), join_flags(est2.flags));
}

using Body = std::function<void(Run&)>;

const std::vector<std::pair<ExperimentInfo, Body>>& registry() {
  static const std::vector<std::pair<ExperimentInfo, Body>> r{
      {{"identity_order", "emergence of the identity grows like eps^-d on [0,1] and the square"}, identity_order},
      {{"ergodic_doubling", "an ergodic Lebesgue measure for x -> 2x has emergence 1"}, ergodic_doubling},
      {{"entropy_suite", "topological, Katok and Lyapunov estimates with the Ruelle inequality"}, entropy_suite},
      {{"covering_measure_space", "covering number of the measure space has order equal to the dimension"},
       covering_measure_space},
      {{"topological_emergence_doubling", "periodic-orbit packings bound the topological emergence of x -> 2x"},
       topological_emergence_doubling},
      {{"periodic_equidistribution", "periodic points of x -> 2x equidistribute toward Lebesgue"},
       periodic_equidistribution},
      {{"standard_map_survey", "exploratory emergence curves of the standard map against the d/2 line"},
       standard_map_survey},
      {{"local_order_probe", "local order of emergence next to the global order"}, local_order},
  };
  return r;
}

ExperimentManifest read_manifest_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::stringstream s;
  s << f.rdbuf();
  return manifest_from_json(s.str());
}

}  // namespace

bool ExperimentManifest::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> list = [] {
    std::vector<ExperimentInfo> v;
    for (const auto& [info, body] : registry()) v.push_back(info);
    return v;
  }();
  return list;
}

bool is_experiment(std::string_view name) {
  const auto& c = experiment_catalog();
  return std::any_of(c.begin(), c.end(), [&](const ExperimentInfo& e) { return e.name == name; });
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentManifest run_experiment(const std::string& name, const Config& config, std::uint64_t seed,
                                  const fs::path& out) {
  const auto& r = registry();
  const auto it = std::find_if(r.begin(), r.end(), [&](const auto& e) { return e.first.name == name; });
  if (it == r.end()) throw UsageError("unknown experiment: " + name);

  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw std::runtime_error("cannot create output directory " + out.string());

  ExperimentManifest m;
  m.experiment = name;
  m.seed = seed;
  m.started = utc_now();
  Params params(config);
  Run run(out, m, params);
  it->second(run);
  m.config = params.used();
  m.finished = utc_now();

  const fs::path path = out / (name + ".manifest.json");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << manifest_to_json(m);
  if (!f) throw std::runtime_error("write failed: " + path.string());
  return m;
}

std::string manifest_to_json(const ExperimentManifest& m) {
  json j;
  j["experiment"] = m.experiment;
  j["seed"] = m.seed;
  json cfg = json::object();
  for (const auto& [k, v] : m.config.entries()) cfg[k] = v;
  j["config"] = cfg;
  j["started"] = m.started;
  j["finished"] = m.finished;
  json outputs = json::array();
  for (const auto& o : m.outputs) outputs.push_back({{"file", o.file}, {"bytes", o.bytes}, {"fnv1a64", o.fnv1a64}});
  j["outputs"] = outputs;
  json checks = json::array();
  for (const auto& c : m.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = checks;
  j["passed"] = m.passed();
  return j.dump(2) + "\n";
}

ExperimentManifest manifest_from_json(std::string_view text) {
  const json j = json::parse(text);
  ExperimentManifest m;
  m.experiment = j.at("experiment").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [k, v] : j.at("config").items()) m.config.set(k, v.get<std::string>());
  m.started = j.value("started", "");
  m.finished = j.value("finished", "");
  for (const auto& o : j.at("outputs")) {
    m.outputs.push_back({o.at("file").get<std::string>(), o.at("bytes").get<std::uint64_t>(),
                         o.at("fnv1a64").get<std::string>()});
  }
  for (const auto& c : j.at("checks")) {
    m.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.value("detail", "")});
  }
  return m;
}

std::vector<ManifestReport> verify_manifests(const fs::path& out) {
  if (!fs::is_directory(out)) throw std::runtime_error("not a directory: " + out.string());
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(out)) {
    const std::string n = e.path().filename().string();
    if (n.size() > 14 && n.ends_with(".manifest.json")) paths.push_back(e.path());
  }
  std::sort(paths.begin(), paths.end());

  std::vector<ManifestReport> reports;
  for (const auto& path : paths) {
    ManifestReport r;
    r.manifest = path;
    try {
      const auto m = read_manifest_file(path);
      r.experiment = m.experiment;
      r.checks_passed = m.passed();
      for (const auto& c : m.checks) {
        if (!c.passed) r.problems.push_back("check failed: " + c.name);
      }
      for (const auto& o : m.outputs) {
        std::ifstream f(out / o.file, std::ios::binary);
        if (!f) {
          r.problems.push_back("missing: " + o.file);
          continue;
        }
        std::stringstream s;
        s << f.rdbuf();
        const std::string bytes = s.str();
        if (bytes.size() != o.bytes) r.problems.push_back("size mismatch: " + o.file);
        if (hex64(fnv1a64(bytes)) != o.fnv1a64) r.problems.push_back("hash mismatch: " + o.file);
      }
    } catch (const std::exception& e) {
      r.problems.push_back(std::string("unreadable manifest: ") + e.what());
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace emlab
