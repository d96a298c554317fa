#include "emlab/emergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "emlab/transport.hpp"

namespace emlab {
namespace {

double max_entry(const DistanceMatrix& d) {
  double m = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) m = std::max(m, d(i, j));
  }
  return m;
}

std::size_t bound_for_packing(const DistanceMatrix& d, const std::vector<std::size_t>& order, double r, double eps) {
  std::vector<std::size_t> packing;
  for (auto p : order) {
    bool apart = true;
    for (auto q : packing) {
      if (!(d(p, q) > 2.0 * r)) {
        apart = false;
        break;
      }
    }
    if (apart) packing.push_back(p);
  }
  std::vector<std::size_t> mass;
  std::size_t total = 0;
  for (auto p : packing) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d(i, p) < 0.5 * r) ++m;
    }
    mass.push_back(m);
    total += m;
  }
  std::sort(mass.begin(), mass.end(), std::greater<>());
  const double budget = eps * static_cast<double>(d.size());
  // Smallest N with (r/2) * (mass outside the N heaviest groups) < eps * M.
  std::size_t outside = total;
  for (std::size_t n = 0; n <= mass.size(); ++n) {
    if (0.5 * r * static_cast<double>(outside) < budget) return std::max<std::size_t>(n, 1);
    if (n < mass.size()) outside -= mass[n];
  }
  return std::max<std::size_t>(mass.size(), 1);
}

}  // namespace

std::size_t ball_mass_lower_bound(const DistanceMatrix& d, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (d.size() <= 1) return 1;
  const double top = max_entry(d);
  std::vector<std::size_t> index_order(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) index_order[i] = i;
  // Farthest-first order from member 0.
  std::vector<std::size_t> far_order{0};
  std::vector<double> gap(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) gap[i] = d(i, 0);
  std::vector<char> used(d.size(), 0);
  used[0] = 1;
  for (std::size_t step = 1; step < d.size(); ++step) {
    std::size_t pick = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!used[i] && gap[i] > best) {
        best = gap[i];
        pick = i;
      }
    }
    used[pick] = 1;
    far_order.push_back(pick);
    for (std::size_t i = 0; i < d.size(); ++i) gap[i] = std::min(gap[i], d(i, pick));
  }
  std::size_t best = 1;
  for (double r = 0.5 * eps; r <= top; r *= 1.25) {
    best = std::max(best, bound_for_packing(d, index_order, r, eps));
    best = std::max(best, bound_for_packing(d, far_order, r, eps));
  }
  return best;
}

EmergenceCurve emergence_curve(const DistanceMatrix& d, std::span<const double> eps_grid,
                               const EmergenceOptions& options) {
  if (d.size() == 0) throw std::invalid_argument("emergence of an empty cloud");
  if (eps_grid.empty()) throw std::invalid_argument("eps_grid must be non-empty");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0)) throw std::invalid_argument("eps must be positive");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) throw std::invalid_argument("eps_grid must be strictly decreasing");
  }
  const std::size_t m = d.size();
  const MedoidScan scan(d, eps_grid, options.search);
  EmergenceCurve curve;
  curve.cloud_size = m;
  for (double eps : eps_grid) {
    EmergencePoint p;
    p.eps = eps;
    p.n_upper = scan.smallest_meeting(eps);
    if (p.n_upper <= scan.max_centers()) {
      p.centers = scan.best(p.n_upper).medoids;
    } else {
      for (std::size_t i = 0; i < m; ++i) p.centers.push_back(i);
    }
    const auto r = residuals(d, p.centers);
    double sum = 0.0, sq = 0.0;
    for (double v : r) sum += v;
    p.mean_residual = sum / static_cast<double>(m);
    for (double v : r) sq += (v - p.mean_residual) * (v - p.mean_residual);
    p.residual_stderr = m > 1 ? std::sqrt(sq / static_cast<double>(m - 1) / static_cast<double>(m)) : 0.0;
    p.n_lower = ball_mass_lower_bound(d, eps);
    if (m <= options.exact_limit) {
      p.n_exact = exact_center_count(d, eps);
      // Any family of arbitrary measures with mean < eps yields medoids
      // with mean < 2 eps (each center replaced by its nearest member).
      p.n_lower = std::max(p.n_lower, exact_center_count(d, 2.0 * eps));
    }
    p.n_lower = std::min(p.n_lower, p.n_upper);
    if (p.n_upper == m && m > 1) p.flags.push_back("saturated");
    curve.points.push_back(std::move(p));
  }
  return curve;
}

EmergenceCurve emergence_curve(const EmpiricalCloud& cloud, std::span<const double> eps_grid,
                               const EmergenceOptions& options) {
  const DistanceMatrix d = pairwise_w1(cloud.members);
  EmergenceCurve curve = emergence_curve(d, eps_grid, options);
  char buf[160];
  std::snprintf(buf, sizeof buf, "system=%s;M=%zu;n=%zu;seed=%llu;reference=%s", cloud.system.name().c_str(),
                cloud.size(), cloud.horizon, static_cast<unsigned long long>(cloud.seed),
                std::string(to_string(cloud.options.reference)).c_str());
  curve.provenance = buf;
  return curve;
}

EmergencePoint metric_emergence(const EmpiricalCloud& cloud, double eps, const EmergenceOptions& options) {
  const double grid[] = {eps};
  return emergence_curve(cloud, grid, options).points.front();
}

void write_curve_csv(std::ostream& out, const EmergenceCurve& curve) {
  out << "eps,N_lower,N_upper,mean_residual,flags\n";
  char buf[128];
  for (const auto& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%zu,%zu,%.17g,", p.eps, p.n_lower, p.n_upper, p.mean_residual);
    out << buf << join_flags(p.flags) << '\n';
  }
}

TopologicalEmergence topological_emergence_lower(const DynamicalSystem& sys, int max_period, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (max_period > 16) throw std::invalid_argument("max_period must be at most 16");
  TopologicalEmergence out;
  std::vector<DiscreteMeasure> chosen;
  for (auto& orbit : orbits_up_to_period(sys, max_period)) {
    ++out.candidates;
    DiscreteMeasure mu = orbit.measure(sys.space());
    bool apart = true;
    for (const auto& c : chosen) {
      if (!(w1_distance(mu, c) >= 2.0 * eps - 1e-14)) {
        apart = false;
        break;
      }
    }
    if (apart) {
      chosen.push_back(std::move(mu));
      out.packing.push_back(std::move(orbit));
    }
  }
  out.count = chosen.size();
  return out;
}

namespace {

OrderEstimate order_from_masses(const std::vector<double>& masses, std::span<const double> eps_grid) {
  std::vector<ScalePoint> samples;
  bool all_full = true;
  for (std::size_t k = 0; k < eps_grid.size(); ++k) {
    if (masses[k] < 1.0) all_full = false;
    samples.push_back({eps_grid[k], masses[k] > 0.0 ? 1.0 / masses[k] : 0.0});
  }
  OrderEstimate est = order_of(samples);
  if (all_full) est.flags.push_back("degenerate");
  return est;
}

}  // namespace

OrderEstimate local_emergence_order(const EmpiricalCloud& cloud, const DiscreteMeasure& center,
                                    std::span<const double> eps_grid) {
  std::vector<double> dist;
  dist.reserve(cloud.size());
  for (const auto& m : cloud.members) dist.push_back(w1_distance(m, center));
  std::vector<double> masses;
  for (double eps : eps_grid) {
    const auto inside = std::count_if(dist.begin(), dist.end(), [&](double v) { return v < eps; });
    masses.push_back(static_cast<double>(inside) / static_cast<double>(dist.size()));
  }
  return order_from_masses(masses, eps_grid);
}

LocalOrderProbe local_order_probe(const DistanceMatrix& d, std::span<const double> eps_grid,
                                  const EmergenceCurve& curve, std::size_t centers) {
  LocalOrderProbe probe;
  std::vector<ScalePoint> global;
  for (const auto& p : curve.points) global.push_back({p.eps, static_cast<double>(p.n_upper)});
  probe.global = order_of(global);
  const std::size_t m = d.size();
  double sum = 0.0;
  for (std::size_t c = 0; c < std::min(centers, m); ++c) {
    std::vector<double> masses;
    for (double eps : eps_grid) {
      std::size_t inside = 0;
      for (std::size_t i = 0; i < m; ++i) inside += d(i, c) < eps ? 1 : 0;
      masses.push_back(static_cast<double>(inside) / static_cast<double>(m));
    }
    const OrderEstimate est = order_from_masses(masses, eps_grid);
    if (std::isfinite(est.slope)) {
      sum += est.slope;
      ++probe.centers_used;
    } else {
      ++probe.centers_flagged;
    }
  }
  probe.mean_local_order = probe.centers_used ? sum / static_cast<double>(probe.centers_used) : 0.0;
  return probe;
}

}  // namespace emlab
