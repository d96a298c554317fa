#include "emlab/kmedoids.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

#include "emlab/orbit.hpp"
#include "emlab/parallel.hpp"
#include "emlab/transport.hpp"

namespace emlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

/// Medoids with nearest / second-nearest bookkeeping per point.
class Chain {
 public:
  explicit Chain(const DistanceMatrix& d) : d_(d), near_(d.size(), kNone), second_(d.size(), kNone),
                                            dnear_(d.size(), kInf), dsecond_(d.size(), kInf) {}

  std::size_t size() const { return medoids_.size(); }

  double cost() const {
    double c = 0.0;
    for (double v : dnear_) c += v;
    return c;
  }

  MedoidSet snapshot() const {
    MedoidSet s{medoids_, cost()};
    std::sort(s.medoids.begin(), s.medoids.end());
    return s;
  }

  bool is_medoid(std::size_t x) const { return std::find(medoids_.begin(), medoids_.end(), x) != medoids_.end(); }

  void add(std::size_t c) {
    const std::size_t slot = medoids_.size();
    medoids_.push_back(c);
    for (std::size_t i = 0; i < d_.size(); ++i) offer(i, slot, d_(i, c));
  }

  /// Point with the largest residual, lowest index on ties; kNone if all are 0.
  std::size_t farthest() const {
    std::size_t best = kNone;
    double far = 0.0;
    for (std::size_t i = 0; i < d_.size(); ++i) {
      if (dnear_[i] > far) {
        far = dnear_[i];
        best = i;
      }
    }
    return best;
  }

  void replace(std::size_t slot, std::size_t x) {
    medoids_[slot] = x;
    for (std::size_t i = 0; i < d_.size(); ++i) {
      if (near_[i] == slot || second_[i] == slot) {
        recompute(i);
      } else {
        offer(i, slot, d_(i, x));
      }
    }
  }

  /// Moves each medoid to the best point of its Voronoi cell until stable.
  void voronoi_iterations(std::size_t max_rounds = 20) {
    for (std::size_t round = 0; round < max_rounds; ++round) {
      std::vector<std::vector<std::size_t>> cells(medoids_.size());
      for (std::size_t i = 0; i < d_.size(); ++i) cells[near_[i]].push_back(i);
      bool changed = false;
      for (std::size_t s = 0; s < medoids_.size(); ++s) {
        const auto& cell = cells[s];
        double current = 0.0;
        for (auto i : cell) current += d_(i, medoids_[s]);
        std::size_t pick = medoids_[s];
        for (auto c : cell) {
          double sum = 0.0;
          for (auto i : cell) {
            sum += d_(i, c);
            if (sum >= current) break;
          }
          if (sum < current) {
            current = sum;
            pick = c;
          }
        }
        if (pick != medoids_[s]) {
          replace(s, pick);
          changed = true;
        }
      }
      if (!changed) return;
    }
  }

  /// One pass over candidate points, applying the best improving swap for
  /// each (eager best-improvement). Returns true if anything changed.
  bool swap_pass() {
    const std::size_t n = d_.size();
    const std::size_t k = medoids_.size();
    std::vector<double> per_slot(k);
    bool changed = false;
    for (std::size_t x = 0; x < n; ++x) {
      if (dnear_[x] == 0.0 || is_medoid(x)) continue;
      std::fill(per_slot.begin(), per_slot.end(), 0.0);
      double shared = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dx = d_(i, x);
        const double gain = std::min(0.0, dx - dnear_[i]);
        shared += gain;
        // Removing the nearest medoid of i: i falls back to min(dx, second).
        per_slot[near_[i]] += std::min(dx, dsecond_[i]) - dnear_[i] - gain;
      }
      std::size_t slot = kNone;
      double delta = -1e-12 * (1.0 + std::abs(shared));
      for (std::size_t s = 0; s < k; ++s) {
        const double v = shared + per_slot[s];
        if (v < delta) {
          delta = v;
          slot = s;
        }
      }
      if (slot != kNone) {
        replace(slot, x);
        changed = true;
      }
    }
    return changed;
  }

 private:
  void offer(std::size_t i, std::size_t slot, double dist) {
    if (dist < dnear_[i]) {
      second_[i] = near_[i];
      dsecond_[i] = dnear_[i];
      near_[i] = slot;
      dnear_[i] = dist;
    } else if (dist < dsecond_[i]) {
      second_[i] = slot;
      dsecond_[i] = dist;
    }
  }

  void recompute(std::size_t i) {
    near_[i] = second_[i] = kNone;
    dnear_[i] = dsecond_[i] = kInf;
    for (std::size_t s = 0; s < medoids_.size(); ++s) offer(i, s, d_(i, medoids_[s]));
  }

  const DistanceMatrix& d_;
  std::vector<std::size_t> medoids_;
  std::vector<std::size_t> near_, second_;
  std::vector<double> dnear_, dsecond_;
};

void refine(Chain& chain, std::size_t passes) {
  for (std::size_t p = 0; p < passes && chain.swap_pass(); ++p) {
  }
}

std::vector<MedoidSet> run_chain(const DistanceMatrix& d, std::size_t first, double smallest,
                                 const MedoidSearchOptions& options) {
  const std::size_t n = d.size();
  const bool full = n <= options.full_swap_limit;
  Chain chain(d);
  chain.add(first);
  std::vector<MedoidSet> out;
  for (;;) {
    chain.voronoi_iterations();
    if (full) refine(chain, options.max_swap_passes);
    out.push_back(chain.snapshot());
    if (meets_budget(out.back().cost, n, smallest) || chain.size() == n) break;
    const std::size_t next = chain.farthest();
    if (next == kNone) break;
    chain.add(next);
  }
  return out;
}

bool lex_less(const MedoidSet& a, const MedoidSet& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.medoids < b.medoids;
}

}  // namespace

DistanceMatrix pairwise_w1(std::span<const DiscreteMeasure> members) {
  const std::size_t m = members.size();
  DistanceMatrix d(m);
  parallel_for(m, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto& a = members[i];
      const auto& b = members[j];
      const double v = (a.size() == 1 && b.size() == 1) ? a.space().distance(a[0].point, b[0].point)
                                                        : w1_distance(a, b);
      d.set(i, j, v);
    }
  });
  return d;
}

std::vector<double> residuals(const DistanceMatrix& d, std::span<const std::size_t> medoids) {
  std::vector<double> r(d.size(), kInf);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (auto m : medoids) r[i] = std::min(r[i], d(i, m));
  }
  return r;
}

double assignment_cost(const DistanceMatrix& d, std::span<const std::size_t> medoids) {
  double c = 0.0;
  for (double v : residuals(d, medoids)) c += v;
  return c;
}

bool meets_budget(double cost, std::size_t points, double eps) {
  return cost / static_cast<double>(points) < eps - 1e-12;
}

MedoidSet exact_medoids(const DistanceMatrix& d, std::size_t k) {
  const std::size_t n = d.size();
  if (n > 20) throw std::invalid_argument("exact_medoids is limited to 20 points");
  if (k < 1 || k > n) throw std::invalid_argument("exact_medoids: k out of range");
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  MedoidSet best{idx, assignment_cost(d, idx)};
  for (;;) {
    // Next k-combination in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
    const double c = assignment_cost(d, idx);
    if (c < best.cost) best = {idx, c};
  }
  return best;
}

std::size_t exact_center_count(const DistanceMatrix& d, double eps) {
  for (std::size_t k = 1; k <= d.size(); ++k) {
    if (meets_budget(exact_medoids(d, k).cost, d.size(), eps)) return k;
  }
  return d.size();
}

MedoidScan::MedoidScan(const DistanceMatrix& d, std::span<const double> eps_targets,
                       const MedoidSearchOptions& options)
    : points_(d.size()) {
  if (points_ == 0) throw std::invalid_argument("MedoidScan needs at least one point");
  if (eps_targets.empty()) throw std::invalid_argument("MedoidScan needs a budget");
  const double smallest = *std::min_element(eps_targets.begin(), eps_targets.end());
  if (!(smallest > 0.0)) throw std::invalid_argument("budgets must be positive");

  std::size_t best_single = 0;
  double best_sum = kInf;
  for (std::size_t c = 0; c < points_; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < points_; ++i) s += d(i, c);
    if (s < best_sum) {
      best_sum = s;
      best_single = c;
    }
  }
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  std::vector<std::size_t> firsts(restarts, best_single);
  for (std::size_t r = 1; r < restarts; ++r) {
    std::mt19937_64 rng(stream_seed(options.seed, r));
    firsts[r] = static_cast<std::size_t>(rng() % points_);
  }
  std::vector<std::vector<MedoidSet>> chains(restarts);
  parallel_for(restarts, [&](std::size_t r) { chains[r] = run_chain(d, firsts[r], smallest, options); });

  std::size_t longest = 0;
  for (const auto& c : chains) longest = std::max(longest, c.size());
  best_.resize(longest);
  for (std::size_t k = 0; k < longest; ++k) {
    bool set = false;
    for (const auto& c : chains) {
      if (k >= c.size()) continue;
      if (!set || lex_less(c[k], best_[k])) {
        best_[k] = c[k];
        set = true;
      }
    }
  }
  if (points_ <= options.full_swap_limit) return;
  // Large clouds: swap refinement of the best solutions below the first size
  // meeting each budget, located by bisection over the size.
  for (double eps : eps_targets) {
    std::size_t hi = 0;
    while (hi < best_.size() && !meets_budget(best_[hi].cost, points_, eps)) ++hi;
    std::size_t lo = 0;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      Chain c(d);
      for (auto m : best_[mid].medoids) c.add(m);
      refine(c, options.large_swap_passes);
      MedoidSet s = c.snapshot();
      if (lex_less(s, best_[mid])) best_[mid] = std::move(s);
      if (meets_budget(best_[mid].cost, points_, eps)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
  }
}

std::size_t MedoidScan::smallest_meeting(double eps) const {
  for (std::size_t k = 0; k < best_.size(); ++k) {
    if (meets_budget(best_[k].cost, points_, eps)) return k + 1;
  }
  return points_;
}

const MedoidSet& MedoidScan::best(std::size_t n) const {
  if (n < 1 || n > best_.size()) throw std::out_of_range("MedoidScan: no solution with that many centers");
  return best_[n - 1];
}

}  // namespace emlab
