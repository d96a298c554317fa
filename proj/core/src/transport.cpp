#include "emlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace emlab {
namespace {

constexpr double kMassEps = 1e-15;

void require_same_space(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.space() != b.space()) throw std::invalid_argument("w1_distance: measures on different spaces");
}

// Step function F = (a - b)([0, x]) sampled on the merged support, as a list
// of (value, length) pieces covering [first atom, 1) plus [0, first atom).
struct Piece {
  double value;
  double length;
};

std::vector<Piece> cdf_difference(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  const auto& pa = a.atoms();
  const auto& pb = b.atoms();
  std::vector<Piece> pieces;
  pieces.reserve(pa.size() + pb.size() + 1);
  std::size_t i = 0, j = 0;
  double f = 0.0;
  double last = 0.0;
  pieces.push_back({0.0, 0.0});
  while (i < pa.size() || j < pb.size()) {
    double x;
    if (j == pb.size() || (i < pa.size() && pa[i].point[0] <= pb[j].point[0])) {
      x = pa[i].point[0];
    } else {
      x = pb[j].point[0];
    }
    pieces.back().length += x - last;
    while (i < pa.size() && pa[i].point[0] == x) f += pa[i++].weight;
    while (j < pb.size() && pb[j].point[0] == x) f -= pb[j++].weight;
    pieces.push_back({f, 0.0});
    last = x;
  }
  return pieces;
}

double interval_w1(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  // Pieces beyond the last atom have F = 0 up to rounding; only the span
  // between the first and last atom contributes.
  const auto& pa = a.atoms();
  const auto& pb = b.atoms();
  std::size_t i = 0, j = 0;
  double f = 0.0;
  double total = 0.0;
  bool started = false;
  double last = 0.0;
  while (i < pa.size() || j < pb.size()) {
    double x;
    if (j == pb.size() || (i < pa.size() && pa[i].point[0] <= pb[j].point[0])) {
      x = pa[i].point[0];
    } else {
      x = pb[j].point[0];
    }
    if (started) total += std::abs(f) * (x - last);
    while (i < pa.size() && pa[i].point[0] == x) f += pa[i++].weight;
    while (j < pb.size() && pb[j].point[0] == x) f -= pb[j++].weight;
    last = x;
    started = true;
  }
  return total;
}

// Lower weighted median of the piece values: the smallest value whose
// cumulative length reaches half. Expected linear time via nth_element.
double weighted_median(std::vector<Piece> work, double half) {
  auto less = [](const Piece& x, const Piece& y) { return x.value < y.value; };
  auto first = work.begin();
  auto last = work.end();
  double before = 0.0;
  while (last - first > 1) {
    auto mid = first + (last - first - 1) / 2;
    std::nth_element(first, mid, last, less);
    double left = 0.0;
    for (auto it = first; it <= mid; ++it) left += it->length;
    if (before + left >= half) {
      last = mid + 1;
      if (last - first == 1) break;
      // mid is the largest of [first, last); keep it as a candidate.
      double without = left - mid->length;
      if (before + without >= half) {
        last = mid;
      } else {
        return mid->value;
      }
    } else {
      before += left;
      first = mid + 1;
    }
  }
  if (first == last) --first;  // rounding left the total just short of half
  return first->value;
}

double circle_w1(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  auto pieces = cdf_difference(a, b);
  // The tail [last atom, 1) joins the head [0, first atom) with F ~ 0.
  double used = 0.0;
  for (const auto& p : pieces) used += p.length;
  pieces.back().length += 1.0 - used;

  double half = 0.0;
  for (const auto& p : pieces) half += p.length;
  half *= 0.5;
  const double median = weighted_median(pieces, half);
  double total = 0.0;
  for (const auto& p : pieces) total += p.length * std::abs(p.value - median);
  return total;
}

}  // namespace

CostMatrix ground_costs(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  CostMatrix c;
  c.rows = a.size();
  c.cols = b.size();
  c.values.resize(c.rows * c.cols);
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) {
      c.values[i * c.cols + j] = a.space().distance(a[i].point, b[j].point);
    }
  }
  return c;
}

double solve_transport(std::span<const double> supply, std::span<const double> demand,
                       const CostMatrix& cost) {
  const std::size_t n = supply.size();
  const std::size_t m = demand.size();
  if (cost.rows != n || cost.cols != m) throw std::invalid_argument("solve_transport: cost shape mismatch");
  if (n == 0 || m == 0) throw std::invalid_argument("solve_transport: empty side");

  std::vector<double> left(supply.begin(), supply.end());
  std::vector<double> right(demand.begin(), demand.end());
  std::vector<double> flow(n * m, 0.0);
  // Nodes: sources [0, n), sinks [n, n + m).
  const std::size_t nodes = n + m;
  std::vector<double> potential(nodes, 0.0);
  std::vector<double> dist(nodes);
  std::vector<std::size_t> prev(nodes);
  std::vector<char> done(nodes);
  const double inf = std::numeric_limits<double>::infinity();

  auto remaining = [&] {
    double r = 0.0;
    for (double v : left) r += v;
    return r;
  };

  while (remaining() > kMassEps) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (left[i] > kMassEps) {
        dist[i] = 0.0;
        prev[i] = i;
      }
    }
    std::size_t target = nodes;
    for (;;) {
      std::size_t u = nodes;
      double best = inf;
      for (std::size_t v = 0; v < nodes; ++v) {
        if (!done[v] && dist[v] < best) {
          best = dist[v];
          u = v;
        }
      }
      if (u == nodes) break;
      done[u] = 1;
      if (u >= n && right[u - n] > kMassEps) {
        target = u;
        break;
      }
      if (u < n) {
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t v = n + j;
          if (done[v]) continue;
          double reduced = cost(u, j) + potential[u] - potential[v];
          double nd = dist[u] + std::max(reduced, 0.0);
          if (nd < dist[v]) {
            dist[v] = nd;
            prev[v] = u;
          }
        }
      } else {
        const std::size_t j = u - n;
        for (std::size_t i = 0; i < n; ++i) {
          if (done[i] || flow[i * m + j] <= 0.0) continue;
          double reduced = -cost(i, j) + potential[u] - potential[i];
          double nd = dist[u] + std::max(reduced, 0.0);
          if (nd < dist[i]) {
            dist[i] = nd;
            prev[i] = u;
          }
        }
      }
    }
    if (target == nodes) break;  // remaining mass is rounding noise

    const double reach = dist[target];
    for (std::size_t v = 0; v < nodes; ++v) potential[v] += std::min(dist[v], reach);

    // Bottleneck along the path back to a source with spare supply.
    double amount = right[target - n];
    std::size_t v = target;
    while (prev[v] != v) {
      std::size_t u = prev[v];
      if (u >= n) amount = std::min(amount, flow[v * m + (u - n)]);  // backward arc sink u -> source v
      v = u;
    }
    amount = std::min(amount, left[v]);

    v = target;
    while (prev[v] != v) {
      std::size_t u = prev[v];
      if (u < n) {
        flow[u * m + (v - n)] += amount;
      } else {
        double& f = flow[v * m + (u - n)];
        f -= amount;
        if (f < kMassEps * 1e-3) f = 0.0;
      }
      v = u;
    }
    left[v] -= amount;
    right[target - n] -= amount;
    if (left[v] < kMassEps * 1e-3) left[v] = 0.0;
    if (right[target - n] < kMassEps * 1e-3) right[target - n] = 0.0;
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) total += flow[i * m + j] * cost(i, j);
  }
  return total;
}

double w1_by_transport(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  require_same_space(a, b);
  std::vector<double> sa, sb;
  for (const auto& x : a.atoms()) sa.push_back(x.weight);
  for (const auto& x : b.atoms()) sb.push_back(x.weight);
  return solve_transport(sa, sb, ground_costs(a, b));
}

double w1_distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  require_same_space(a, b);
  switch (a.space().kind()) {
    case SpaceKind::unit_interval: return interval_w1(a, b);
    case SpaceKind::circle: return circle_w1(a, b);
    case SpaceKind::square:
    case SpaceKind::torus2: return w1_by_transport(a, b);
  }
  return 0.0;
}

namespace {

// Integral of |t - c| for t running linearly over [lo, hi].
double abs_integral(double lo, double hi, double c) {
  auto prim = [c](double t) { return 0.5 * (t - c) * std::abs(t - c); };
  return prim(hi) - prim(lo);
}

}  // namespace

double w1_to_lebesgue(const DiscreteMeasure& mu) {
  if (mu.space().box_dimension() != 1) throw std::invalid_argument("w1_to_lebesgue: 1D spaces only");
  // Pieces of F(x) - x on [x_k, x_{k+1}): F constant, so the integrand runs
  // linearly from F - x_k down to F - x_{k+1}.
  struct Segment {
    double hi;  // value at the left end
    double lo;  // value at the right end
  };
  std::vector<Segment> segs;
  segs.reserve(mu.size() + 1);
  double f = 0.0;
  double last = 0.0;
  for (const auto& a : mu.atoms()) {
    const double x = a.point[0];
    if (x > last) segs.push_back({f - last, f - x});
    f += a.weight;
    last = x;
  }
  if (last < 1.0) segs.push_back({f - last, f - 1.0});

  if (mu.space().kind() == SpaceKind::unit_interval) {
    double total = 0.0;
    for (const auto& s : segs) total += abs_integral(s.lo, s.hi, 0.0);
    return total;
  }

  // Circle: minimise over the constant shift c; the optimum is the median of
  // the values of F(x) - x under Lebesgue measure.
  auto below = [&](double c) {
    double len = 0.0;
    for (const auto& s : segs) len += std::clamp(c - s.lo, 0.0, s.hi - s.lo);
    return len;
  };
  double lo = -2.0, hi = 2.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (below(mid) < 0.5) lo = mid; else hi = mid;
  }
  const double c = hi;
  double total = 0.0;
  for (const auto& s : segs) total += abs_integral(s.lo, s.hi, c);
  return total;
}

}  // namespace emlab
