#include "emlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "emlab/parallel.hpp"
#include "emlab/scaling.hpp"

namespace emlab {
namespace {

constexpr double kPlastic = 1.32471795724474602596;

std::size_t cell_of(double x, std::size_t cells) {
  const auto c = static_cast<std::size_t>(x * static_cast<double>(cells));
  return std::min(c, cells - 1);
}

/// Offsets of neighboring cells along one axis, wrapped or clipped.
std::vector<std::size_t> axis_neighbors(std::size_t c, std::size_t cells, bool periodic) {
  std::vector<std::size_t> out;
  for (int d = -1; d <= 1; ++d) {
    const auto v = static_cast<std::int64_t>(c) + d;
    const auto g = static_cast<std::int64_t>(cells);
    if (periodic) {
      out.push_back(static_cast<std::size_t>((v % g + g) % g));
    } else if (v >= 0 && v < g) {
      out.push_back(static_cast<std::size_t>(v));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool ergodic_reference(const DynamicalSystem& sys, Sampler reference) {
  if (reference == Sampler::bernoulli_mixture) return false;
  if (sys.kind() == MapKind::identity) return false;
  if (sys.kind() == MapKind::product) {
    return ergodic_reference(sys.first(), reference) && ergodic_reference(sys.second(), reference);
  }
  return true;
}

// Least squares log N = a + b log n + h n via the 3x3 normal equations.
void fit_with_log_term(const std::vector<double>& n, const std::vector<double>& y, EntropyScale& s) {
  double m[3][4] = {};
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double row[3] = {1.0, std::log(n[i]), n[i]};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] += row[r] * row[c];
      m[r][3] += row[r] * y[i];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    std::swap(m[col], m[piv]);
    if (std::abs(m[col][col]) < 1e-300) throw std::invalid_argument("degenerate n_grid for the log-term fit");
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  const double a = m[0][3] / m[0][0], b = m[1][3] / m[1][1], h = m[2][3] / m[2][2];
  double ssr = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double r = y[i] - (a + b * std::log(n[i]) + h * n[i]);
    ssr += r * r;
  }
  s.slope = h;
  s.log_coefficient = b;
  s.residual = std::sqrt(ssr / static_cast<double>(n.size()));
}

EntropyScale fit_scale(double eps, std::span<const std::size_t> n_grid, std::vector<std::size_t> counts,
                       EntropyFit fit) {
  EntropyScale s;
  s.eps = eps;
  s.counts = std::move(counts);
  if (fit == EntropyFit::with_log_term) {
    if (n_grid.size() < 4) throw std::invalid_argument("the log-term fit needs at least four horizons");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      xs.push_back(static_cast<double>(n_grid[i]));
      ys.push_back(std::log(static_cast<double>(std::max<std::size_t>(s.counts[i], 1))));
    }
    fit_with_log_term(xs, ys, s);
  } else if (n_grid.size() >= 2) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      xs.push_back(static_cast<double>(n_grid[i]));
      ys.push_back(std::log(static_cast<double>(std::max<std::size_t>(s.counts[i], 1))));
    }
    const LineFit line = fit_line(xs, ys);
    s.slope = line.slope;
    s.residual = line.rms_residual;
  }
  return s;
}

void check_n_grid(std::span<const std::size_t> n_grid) {
  if (n_grid.empty()) throw std::invalid_argument("n_grid must be non-empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw std::invalid_argument("n_grid must be positive and strictly increasing");
    }
  }
}

void finish(EntropyEstimate& est, std::span<const std::size_t> n_grid) {
  const EntropyScale& last = est.scales.back();
  est.eps = last.eps;
  est.n_grid.assign(n_grid.begin(), n_grid.end());
  est.counts = last.counts;
  for (auto c : est.counts) est.log_counts.push_back(std::log(static_cast<double>(std::max<std::size_t>(c, 1))));
  est.slope = last.slope;
  est.value = std::max(0.0, last.slope);
  est.residual = last.residual;
  if (est.residual > 0.1) est.flags.push_back("unstable_slope");
  if (est.scales.size() >= 2 && std::abs(last.slope - est.scales[est.scales.size() - 2].slope) > 0.05) {
    est.flags.push_back("not_stabilized");
  }
  for (const auto& s : est.scales) {
    for (auto c : s.counts) {
      if (4 * c > est.sample_size) {
        if (std::find(est.flags.begin(), est.flags.end(), "saturated") == est.flags.end()) {
          est.flags.push_back("saturated");
        }
      }
    }
  }
}

}  // namespace

double bowen_distance(const DynamicalSystem& sys, const Point& x, const Point& y, std::size_t n) {
  if (n == 0) throw std::invalid_argument("bowen_distance needs n >= 1");
  const auto ox = orbit(sys, x, n);
  const auto oy = orbit(sys, y, n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) d = std::max(d, sys.space().distance(ox[i], oy[i]));
  return d;
}

Trajectories trajectories_from_starts(const DynamicalSystem& sys, std::span<const Point> starts, std::size_t length) {
  Trajectories tr{sys.space(), starts.size(), length, std::vector<Point>(starts.size() * length)};
  parallel_for(starts.size(), [&](std::size_t i) {
    const auto o = orbit(sys, starts[i], length);
    std::copy(o.begin(), o.end(), tr.points.begin() + static_cast<std::ptrdiff_t>(i * length));
  });
  return tr;
}

Trajectories trajectories_from_sampler(const DynamicalSystem& sys, Sampler sampler, std::uint64_t seed,
                                       std::size_t count, std::size_t length) {
  Trajectories tr{sys.space(), count, length, std::vector<Point>(count * length)};
  parallel_for(count, [&](std::size_t i) {
    const auto o = sample_orbit(sys, sampler, seed, i, count, length);
    std::copy(o.points.begin(), o.points.end(), tr.points.begin() + static_cast<std::ptrdiff_t>(i * length));
  });
  return tr;
}

std::vector<Point> low_discrepancy_points(const PointSpace& space, std::size_t count) {
  std::vector<Point> pts(count);
  const bool two_d = space.box_dimension() == 2;
  const double a1 = two_d ? 1.0 / kPlastic : kGoldenRotation;
  const double a2 = 1.0 / (kPlastic * kPlastic);
  for (std::size_t i = 0; i < count; ++i) {
    const double k = static_cast<double>(i + 1);
    pts[i] = {wrap_unit(0.5 + k * a1), two_d ? wrap_unit(0.5 + k * a2) : 0.0};
  }
  return pts;
}

GreedyCover greedy_bowen_cover(const Trajectories& tr, std::size_t n, double eps) {
  if (n == 0 || n > tr.length) throw std::invalid_argument("cover horizon outside the trajectory length");
  if (!(eps > 0.0)) throw std::invalid_argument("cover radius must be positive");
  const PointSpace& space = tr.space;
  const bool two_d = space.box_dimension() == 2;
  const bool periodic = space.periodic();
  const std::size_t cells = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(1.0 / eps)));
  const std::size_t last = n - 1;

  // Bucket key from the cells at time 0 and time n-1.
  auto coords = [&](std::size_t i) {
    std::array<std::size_t, 4> c{};
    const Point& a = tr.at(i, 0);
    const Point& b = tr.at(i, last);
    c[0] = cell_of(a[0], cells);
    c[1] = two_d ? cell_of(a[1], cells) : 0;
    c[2] = cell_of(b[0], cells);
    c[3] = two_d ? cell_of(b[1], cells) : 0;
    return c;
  };
  auto key_of = [&](const std::array<std::size_t, 4>& c) {
    return ((static_cast<std::uint64_t>(c[0]) * cells + c[1]) * cells + c[2]) * cells + c[3];
  };

  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(tr.count);
  for (std::size_t i = 0; i < tr.count; ++i) keyed[i] = {key_of(coords(i)), static_cast<std::uint32_t>(i)};
  std::sort(keyed.begin(), keyed.end());

  std::vector<char> covered(tr.count, 0);
  GreedyCover cover;
  std::vector<std::uint64_t> keys;
  for (std::size_t i = 0; i < tr.count; ++i) {
    if (covered[i]) continue;
    ++cover.centers;
    std::size_t newly = 0;
    const auto c = coords(i);
    const auto n0 = axis_neighbors(c[0], cells, periodic);
    const auto n1 = two_d ? axis_neighbors(c[1], cells, periodic) : std::vector<std::size_t>{0};
    const auto n2 = axis_neighbors(c[2], cells, periodic);
    const auto n3 = two_d ? axis_neighbors(c[3], cells, periodic) : std::vector<std::size_t>{0};
    keys.clear();
    for (auto a : n0)
      for (auto b : n1)
        for (auto d : n2)
          for (auto e : n3) keys.push_back(key_of({a, b, d, e}));
    for (auto k : keys) {
      auto it = std::lower_bound(keyed.begin(), keyed.end(), std::make_pair(k, std::uint32_t{0}));
      for (; it != keyed.end() && it->first == k; ++it) {
        const std::size_t j = it->second;
        if (covered[j]) continue;
        bool inside = true;
        for (std::size_t t = 0; t < n && inside; ++t) inside = space.distance(tr.at(i, t), tr.at(j, t)) < eps;
        if (inside) {
          covered[j] = 1;
          ++newly;
        }
      }
    }
    cover.ball_sizes.push_back(newly);
  }
  return cover;
}

std::string to_json(const EntropyEstimate& e) {
  nlohmann::ordered_json j;
  j["system"] = e.system;
  j["kind"] = e.kind == EntropyKind::topological ? "topological" : "katok";
  j["eps"] = e.eps;
  j["n_grid"] = e.n_grid;
  j["counts"] = e.counts;
  j["slope"] = e.slope;
  j["residual"] = e.residual;
  j["flags"] = e.flags;
  return j.dump();
}

EntropyEstimate topological_entropy(const DynamicalSystem& sys, std::span<const double> eps_grid,
                                    std::span<const std::size_t> n_grid, std::size_t sample_budget,
                                    EntropyFit fit) {
  check_n_grid(n_grid);
  if (eps_grid.empty()) throw std::invalid_argument("eps_grid must be non-empty");
  std::vector<double> eps(eps_grid.begin(), eps_grid.end());
  std::sort(eps.begin(), eps.end(), std::greater<>());
  for (double e : eps) {
    if (!(e > 0.0)) throw std::invalid_argument("eps must be positive");
  }
  auto starts = low_discrepancy_points(sys.space(), sample_budget);
  // Index-ordered greedy on the additive sequence resonates with expanding
  // maps (counts follow the Fibonacci numbers under doubling), so the sample
  // is visited in a fixed pseudo-random order.
  std::mt19937_64 rng(0x5eed);
  for (std::size_t i = starts.size(); i > 1; --i) std::swap(starts[i - 1], starts[rng() % i]);
  const Trajectories tr = trajectories_from_starts(sys, starts, n_grid.back());

  const std::size_t cells = eps.size() * n_grid.size();
  std::vector<std::size_t> counts(cells);
  parallel_for(cells, [&](std::size_t c) {
    counts[c] = greedy_bowen_cover(tr, n_grid[c % n_grid.size()], eps[c / n_grid.size()]).centers;
  });

  EntropyEstimate est;
  est.system = sys.name();
  est.kind = EntropyKind::topological;
  est.fit = fit;
  est.sample_size = sample_budget;
  for (std::size_t e = 0; e < eps.size(); ++e) {
    std::vector<std::size_t> row(counts.begin() + static_cast<std::ptrdiff_t>(e * n_grid.size()),
                                 counts.begin() + static_cast<std::ptrdiff_t>((e + 1) * n_grid.size()));
    est.scales.push_back(fit_scale(eps[e], n_grid, std::move(row), fit));
  }
  finish(est, n_grid);
  return est;
}

EntropyEstimate katok_entropy(const DynamicalSystem& sys, Sampler reference, double eps, double delta,
                              std::span<const std::size_t> n_grid, std::size_t sample_size, std::uint64_t seed,
                              EntropyFit fit) {
  check_n_grid(n_grid);
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("katok_entropy needs eps and delta in (0,1)");
  }
  const Trajectories tr = trajectories_from_sampler(sys, reference, seed, sample_size, n_grid.back());
  std::vector<std::size_t> counts(n_grid.size());
  const double need = (1.0 - delta) * static_cast<double>(sample_size);
  parallel_for(n_grid.size(), [&](std::size_t k) {
    auto sizes = greedy_bowen_cover(tr, n_grid[k], eps).ball_sizes;
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    std::size_t used = 0, mass = 0;
    while (used < sizes.size() && static_cast<double>(mass) < need) mass += sizes[used++];
    counts[k] = used;
  });

  EntropyEstimate est;
  est.system = sys.name();
  est.kind = EntropyKind::katok;
  est.delta = delta;
  est.sample_size = sample_size;
  est.fit = fit;
  est.scales.push_back(fit_scale(eps, n_grid, std::move(counts), fit));
  finish(est, n_grid);
  if (!ergodic_reference(sys, reference)) est.flags.push_back("reference_not_ergodic");
  return est;
}

LyapunovSpectrum lyapunov(const DynamicalSystem& sys, const Point& x, std::size_t n) {
  if (n == 0) throw std::invalid_argument("lyapunov needs n >= 1");
  const int dim = sys.dimension();
  const auto pts = orbit(sys, x, n);
  LyapunovSpectrum out;
  out.orbit_length = n;
  std::vector<double> norms;
  norms.reserve(n);
  if (dim == 1) {
    std::vector<double> logs;
    logs.reserve(n);
    for (const auto& p : pts) {
      const double d = std::abs(sys.derivative(p)[0]);
      if (d == 0.0) {
        ++out.skipped_steps;
        norms.push_back(0.0);
        continue;
      }
      logs.push_back(std::log(d));
      norms.push_back(std::log(std::max(d, 1.0)));
    }
    const double used = static_cast<double>(std::max<std::size_t>(logs.size(), 1));
    out.exponents = {compensated_sum(logs) / used};
  } else {
    // Columns q1, q2 of an orthonormal frame, advanced by the Jacobians.
    double q[4] = {1, 0, 0, 1};  // row-major, columns are the frame vectors
    std::vector<double> log_r1, log_r2;
    auto orthonormalize = [&]() {
      const double r11 = std::hypot(q[0], q[2]);
      const double e1x = q[0] / r11, e1y = q[2] / r11;
      const double r12 = e1x * q[1] + e1y * q[3];
      const double ux = q[1] - r12 * e1x, uy = q[3] - r12 * e1y;
      const double r22 = std::hypot(ux, uy);
      log_r1.push_back(std::log(r11));
      log_r2.push_back(std::log(r22));
      q[0] = e1x;
      q[2] = e1y;
      q[1] = ux / r22;
      q[3] = uy / r22;
    };
    for (std::size_t k = 0; k < n; ++k) {
      const Jacobian j = sys.derivative(pts[k]);
      norms.push_back(std::log(std::max(operator_norm(j, 2), 1.0)));
      const double a = j[0] * q[0] + j[1] * q[2];
      const double b = j[0] * q[1] + j[1] * q[3];
      const double c = j[2] * q[0] + j[3] * q[2];
      const double d = j[2] * q[1] + j[3] * q[3];
      q[0] = a;
      q[1] = b;
      q[2] = c;
      q[3] = d;
      if ((k + 1) % 10 == 0 || k + 1 == n) orthonormalize();
    }
    const double len = static_cast<double>(n);
    out.exponents = {compensated_sum(log_r1) / len, compensated_sum(log_r2) / len};
    std::sort(out.exponents.begin(), out.exponents.end(), std::greater<>());
  }
  out.log_norm_average = compensated_sum(norms) / static_cast<double>(n);
  for (double e : out.exponents) {
    if (e > 0.0) out.sum_positive += e;
  }
  return out;
}

RuelleReport ruelle_check(const DynamicalSystem& sys, const RuelleOptions& options) {
  RuelleReport r;
  r.entropy = katok_entropy(sys, options.reference, options.eps, options.delta, options.n_grid,
                            options.entropy_sample, options.seed, options.fit)
                  .value;
  const std::size_t m = options.lyapunov_starts;
  std::vector<double> sigma(m), norm(m);
  parallel_for(m, [&](std::size_t i) {
    const Point start = sample_orbit(sys, options.reference, options.seed + 1, i, m, 1).start;
    const LyapunovSpectrum s = lyapunov(sys, start, options.lyapunov_length);
    sigma[i] = s.sum_positive;
    norm[i] = s.log_norm_average;
  });
  r.sum_positive = compensated_sum(sigma) / static_cast<double>(m);
  r.derivative_bound = sys.dimension() * compensated_sum(norm) / static_cast<double>(m);
  r.entropy_ok = r.entropy <= r.sum_positive + 0.05;
  r.bound_ok = r.sum_positive <= r.derivative_bound + 0.05;
  return r;
}

LocalDimension local_dimension(const DiscreteMeasure& mu, std::span<const double> eps_grid, std::uint64_t seed,
                               std::size_t atoms) {
  if (eps_grid.size() < 2) throw std::invalid_argument("local_dimension needs at least two scales");
  const PointSpace& space = mu.space();
  const auto at = mu.atoms();
  std::vector<double> cdf(at.size());
  std::vector<double> weights(at.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < at.size(); ++i) {
    acc += at[i].weight;
    cdf[i] = acc;
    weights[i] = at[i].weight;
  }
  const bool one_d = space.box_dimension() == 1;
  std::vector<double> xs;
  if (one_d) {
    for (const auto& a : at) xs.push_back(a.point[0]);
  }
  // Mass of the closed ball around atom i.
  auto mass_between = [&](double lo, double hi) {
    const auto a = std::lower_bound(xs.begin(), xs.end(), lo) - xs.begin();
    const auto b = std::upper_bound(xs.begin(), xs.end(), hi) - xs.begin();
    if (b <= a) return 0.0;
    return cdf[static_cast<std::size_t>(b) - 1] - (a > 0 ? cdf[static_cast<std::size_t>(a) - 1] : 0.0);
  };
  auto ball_mass = [&](std::size_t i, double r) {
    if (one_d) {
      const double x = xs[i];
      if (!space.periodic()) return mass_between(x - r, x + r);
      if (r >= 0.5) return 1.0;
      double m = mass_between(x - r, x + r);
      if (x - r < 0.0) m += mass_between(x - r + 1.0, 1.0);
      if (x + r >= 1.0) m += mass_between(0.0, x + r - 1.0);
      return m;
    }
    double m = 0.0;
    for (const auto& a : at) {
      if (space.distance(a.point, at[i].point) <= r) m += a.weight;
    }
    return m;
  };

  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  LocalDimension out;
  std::vector<double> slopes;
  for (std::size_t s = 0; s < atoms; ++s) {
    const std::size_t i = pick(rng);
    std::vector<double> lx, ly;
    for (double r : eps_grid) {
      const double m = ball_mass(i, r);
      if (!(m > 0.0)) {
        ++out.dropped_scales;
        continue;
      }
      lx.push_back(std::log(r));
      ly.push_back(std::log(std::min(m, 1.0)));
    }
    if (lx.size() < 2) continue;
    slopes.push_back(fit_line(lx, ly).slope);
  }
  out.atoms_used = slopes.size();
  out.value = slopes.empty() ? 0.0 : std::accumulate(slopes.begin(), slopes.end(), 0.0) / slopes.size();
  return out;
}

}  // namespace emlab
