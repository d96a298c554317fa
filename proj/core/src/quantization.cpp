#include "emlab/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "emlab/transport.hpp"

namespace emlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Contiguous-group costs over sorted weighted points via prefix sums.
class GroupCost {
 public:
  GroupCost(std::span<const double> xs, std::span<const double> ws) : xs_(xs.begin(), xs.end()) {
    w_.assign(xs.size() + 1, 0.0);
    wx_.assign(xs.size() + 1, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      w_[i + 1] = w_[i] + ws[i];
      wx_[i + 1] = wx_[i] + ws[i] * xs[i];
    }
  }

  std::size_t size() const { return xs_.size(); }

  // Index of the weighted median of points [l, r).
  std::size_t median(std::size_t l, std::size_t r) const {
    const double target = w_[l] + 0.5 * (w_[r] - w_[l]);
    auto it = std::lower_bound(w_.begin() + static_cast<std::ptrdiff_t>(l) + 1,
                               w_.begin() + static_cast<std::ptrdiff_t>(r) + 1, target);
    auto m = static_cast<std::size_t>(it - w_.begin()) - 1;
    return std::min(std::max(m, l), r - 1);
  }

  double operator()(std::size_t l, std::size_t r) const {
    if (r <= l + 1) return 0.0;
    const std::size_t m = median(l, r);
    const double x = xs_[m];
    const double left = x * (w_[m + 1] - w_[l]) - (wx_[m + 1] - wx_[l]);
    const double right = (wx_[r] - wx_[m + 1]) - x * (w_[r] - w_[m + 1]);
    return std::max(left, 0.0) + std::max(right, 0.0);
  }

 private:
  std::vector<double> xs_;
  std::vector<double> w_;
  std::vector<double> wx_;
};

// Divide-and-conquer layered DP. Returns the optimal cost and the group
// boundaries (start indices, ascending, first is 0).
struct LinearSolution {
  double cost;
  std::vector<std::size_t> starts;
};

LinearSolution solve_linear(const GroupCost& cost, std::size_t groups, bool reconstruct = true) {
  const std::size_t n = cost.size();
  groups = std::min(groups, n);
  // prev[i] = best cost of covering the first i points with k groups.
  std::vector<double> prev(n + 1, kInf), cur(n + 1, kInf);
  std::vector<std::vector<std::uint32_t>> arg(reconstruct ? groups + 1 : 0);
  std::vector<std::uint32_t> scratch(n + 1, 0);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) prev[i] = cost(0, i);
  for (std::size_t k = 2; k <= groups; ++k) {
    std::fill(cur.begin(), cur.end(), kInf);
    if (reconstruct) arg[k].assign(n + 1, 0);
    auto& opt = reconstruct ? arg[k] : scratch;
    // compute(lo, hi, optlo, opthi) over prefix lengths i in [lo, hi]
    struct Frame {
      std::size_t lo, hi, optlo, opthi;
    };
    std::vector<Frame> stack{{k, n, k - 1, n - 1}};
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (f.lo > f.hi) continue;
      const std::size_t mid = (f.lo + f.hi) / 2;
      double best = kInf;
      std::size_t best_j = f.optlo;
      const std::size_t jmax = std::min(f.opthi, mid - 1);
      for (std::size_t j = f.optlo; j <= jmax; ++j) {
        double v = prev[j] + cost(j, mid);
        if (v < best) {
          best = v;
          best_j = j;
        }
      }
      cur[mid] = best;
      opt[mid] = static_cast<std::uint32_t>(best_j);
      if (mid > f.lo) stack.push_back({f.lo, mid - 1, f.optlo, best_j});
      stack.push_back({mid + 1, f.hi, best_j, f.opthi});
    }
    std::swap(prev, cur);
  }
  LinearSolution sol{prev[n], {}};
  if (!reconstruct) return sol;
  std::vector<std::size_t> starts;
  std::size_t end = n;
  for (std::size_t k = groups; k >= 2; --k) {
    std::size_t s = arg[k][end];
    starts.push_back(s);
    end = s;
  }
  starts.push_back(0);
  std::reverse(starts.begin(), starts.end());
  sol.starts = std::move(starts);
  return sol;
}

Quantization quantize_interval(const DiscreteMeasure& mu, std::size_t groups) {
  std::vector<double> xs, ws;
  for (const auto& a : mu.atoms()) {
    xs.push_back(a.point[0]);
    ws.push_back(a.weight);
  }
  GroupCost cost(xs, ws);
  auto sol = solve_linear(cost, groups);
  std::vector<Atom> centers;
  for (std::size_t g = 0; g < sol.starts.size(); ++g) {
    std::size_t l = sol.starts[g];
    std::size_t r = g + 1 < sol.starts.size() ? sol.starts[g + 1] : xs.size();
    double w = 0.0;
    for (std::size_t i = l; i < r; ++i) w += ws[i];
    centers.push_back(Atom{{xs[cost.median(l, r)], 0.0}, w});
  }
  DiscreteMeasure nu(mu.space(), std::move(centers));
  double err = w1_distance(mu, nu);
  return Quantization{std::move(nu), err, true};
}

// Circle: groups are arcs. For a fixed cut the problem is linear on the
// unrolled coordinates. Optimal partitions for different cuts interleave,
// so some optimal circular partition cuts inside the smallest group of the
// optimal partition for cut 0; only those cuts are tried.
Quantization quantize_circle(const DiscreteMeasure& mu, std::size_t groups) {
  const std::size_t n = mu.size();
  std::vector<double> xs(2 * n), ws(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = mu[i].point[0];
    xs[i + n] = mu[i].point[0] + 1.0;
    ws[i] = ws[i + n] = mu[i].weight;
  }
  auto solve_from = [&](std::size_t s) {
    GroupCost cost(std::span<const double>(xs).subspan(s, n), std::span<const double>(ws).subspan(s, n));
    return std::make_pair(solve_linear(cost, groups), cost);
  };

  auto [base, base_cost] = solve_from(0);
  std::size_t lo = 0, hi = n;
  if (base.starts.size() > 1) {
    std::size_t best_len = n + 1;
    for (std::size_t g = 0; g < base.starts.size(); ++g) {
      std::size_t l = base.starts[g];
      std::size_t r = g + 1 < base.starts.size() ? base.starts[g + 1] : n;
      if (r - l < best_len) {
        best_len = r - l;
        lo = l;
        hi = r;
      }
    }
  }
  double best = base.cost;
  std::size_t best_shift = 0;
  LinearSolution best_sol = base;
  for (std::size_t s = lo; s <= hi && s < n; ++s) {
    if (s == 0) continue;
    auto [sol, c] = solve_from(s);
    if (sol.cost < best) {
      best = sol.cost;
      best_shift = s;
      best_sol = std::move(sol);
    }
  }

  GroupCost cost(std::span<const double>(xs).subspan(best_shift, n),
                 std::span<const double>(ws).subspan(best_shift, n));
  std::vector<Atom> centers;
  for (std::size_t g = 0; g < best_sol.starts.size(); ++g) {
    std::size_t l = best_sol.starts[g];
    std::size_t r = g + 1 < best_sol.starts.size() ? best_sol.starts[g + 1] : n;
    double w = 0.0;
    for (std::size_t i = l; i < r; ++i) w += ws[best_shift + i];
    centers.push_back(Atom{{xs[best_shift + cost.median(l, r)], 0.0}, w});
  }
  DiscreteMeasure nu(mu.space(), std::move(centers));
  double err = w1_distance(mu, nu);
  return Quantization{std::move(nu), err, true};
}

// Weighted k-medoids on the support of mu: farthest-first seeding followed
// by Voronoi iteration with medoid updates inside each cell.
Quantization quantize_medoids(const DiscreteMeasure& mu, std::size_t k, std::uint64_t seed) {
  const auto& space = mu.space();
  const std::size_t n = mu.size();
  const auto atoms = mu.atoms();
  std::mt19937_64 rng(seed);

  std::vector<std::size_t> medoids;
  {
    std::size_t heaviest = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (atoms[i].weight > atoms[heaviest].weight) heaviest = i;
    }
    medoids.push_back(heaviest);
  }
  std::vector<double> nearest(n);
  std::vector<std::size_t> owner(n, 0);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = space.distance(atoms[i].point, atoms[medoids[0]].point);
  while (medoids.size() < k) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (nearest[i] * atoms[i].weight > nearest[far] * atoms[far].weight) far = i;
    }
    if (nearest[far] == 0.0) break;
    medoids.push_back(far);
    for (std::size_t i = 0; i < n; ++i) {
      double d = space.distance(atoms[i].point, atoms[far].point);
      if (d < nearest[i]) {
        nearest[i] = d;
        owner[i] = medoids.size() - 1;
      }
    }
  }

  constexpr std::size_t kExactCell = 512;
  constexpr std::size_t kSampledCandidates = 256;
  auto assign = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t who = 0;
      for (std::size_t c = 0; c < medoids.size(); ++c) {
        double d = space.distance(atoms[i].point, atoms[medoids[c]].point);
        if (d < best) {
          best = d;
          who = c;
        }
      }
      nearest[i] = best;
      owner[i] = who;
      total += best * atoms[i].weight;
    }
    return total;
  };

  double total = assign();
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<std::vector<std::size_t>> cells(medoids.size());
    for (std::size_t i = 0; i < n; ++i) cells[owner[i]].push_back(i);
    bool moved = false;
    for (std::size_t c = 0; c < medoids.size(); ++c) {
      const auto& cell = cells[c];
      if (cell.empty()) continue;
      std::vector<std::size_t> candidates = cell;
      if (cell.size() > kExactCell) {
        std::shuffle(candidates.begin(), candidates.end(), rng);
        candidates.resize(kSampledCandidates);
        candidates.push_back(medoids[c]);
      }
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_id = medoids[c];
      for (std::size_t cand : candidates) {
        double s = 0.0;
        for (std::size_t i : cell) s += atoms[i].weight * space.distance(atoms[i].point, atoms[cand].point);
        if (s < best - 1e-15 || (cand == medoids[c] && s <= best)) {
          best = s;
          best_id = cand;
        }
      }
      if (best_id != medoids[c]) {
        medoids[c] = best_id;
        moved = true;
      }
    }
    if (!moved) break;
    double next = assign();
    if (next >= total) {
      total = next;
      break;
    }
    total = next;
  }

  std::vector<double> mass(medoids.size(), 0.0);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mass[owner[i]] += atoms[i].weight;
    err += atoms[i].weight * nearest[i];
  }
  std::vector<Atom> centers;
  for (std::size_t c = 0; c < medoids.size(); ++c) {
    if (mass[c] > 0.0) centers.push_back(Atom{atoms[medoids[c]].point, mass[c]});
  }
  // Sending every atom to its nearest center is an optimal plan towards
  // these weights, so the assignment cost is the W1 distance.
  return Quantization{DiscreteMeasure(space, std::move(centers)), err, false};
}

}  // namespace

double linear_quantization_cost(std::span<const double> xs, std::span<const double> ws, std::size_t groups) {
  if (groups == 0) throw std::invalid_argument("groups must be >= 1");
  GroupCost cost(xs, ws);
  return solve_linear(cost, groups, false).cost;
}

Quantization quantize_best(const DiscreteMeasure& mu, std::size_t n_atoms, std::uint64_t seed) {
  if (n_atoms < 1) throw std::invalid_argument("quantize_best: n_atoms must be >= 1");
  if (n_atoms >= mu.size()) return Quantization{mu, 0.0, true};
  switch (mu.space().kind()) {
    case SpaceKind::unit_interval: return quantize_interval(mu, n_atoms);
    case SpaceKind::circle: return quantize_circle(mu, n_atoms);
    case SpaceKind::square:
    case SpaceKind::torus2: return quantize_medoids(mu, n_atoms, seed);
  }
  throw std::logic_error("unreachable");
}

std::size_t quantization_number(const DiscreteMeasure& mu, double eps, std::uint64_t seed) {
  if (!(eps > 0.0)) throw std::invalid_argument("quantization_number: eps must be > 0");
  auto ok = [&](std::size_t n) { return quantize_best(mu, n, seed).error < eps; };
  if (ok(1)) return 1;
  std::size_t hi = 2;
  while (hi < mu.size() && !ok(hi)) hi *= 2;
  hi = std::min(hi, mu.size());
  std::size_t lo = hi / 2;  // known to fail
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

}  // namespace emlab
