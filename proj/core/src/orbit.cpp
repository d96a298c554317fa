#include "emlab/orbit.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "emlab/parallel.hpp"
#include "emlab/transport.hpp"

namespace emlab {
namespace {

__extension__ typedef unsigned __int128 u128;

constexpr int kDyadicBits = 62;
constexpr std::uint64_t kDyadicDen = std::uint64_t{1} << kDyadicBits;

/// A start coordinate for a 1D factor in one of three exact or inexact forms.
struct Start1D {
  enum class Form { real, rational, digits } form = Form::real;
  double x = 0.0;
  std::uint64_t p = 0;  // rational p / q
  std::uint64_t q = 1;
  std::vector<std::uint8_t> digits;
  double value = 0.0;  // the start as a double
};

int digit_base(const DynamicalSystem& f) { return f.kind() == MapKind::mul ? f.mul_factor() : 2; }

std::size_t window_length(int base) {
  return static_cast<std::size_t>(std::ceil(53.0 / std::log2(static_cast<double>(base)))) + 2;
}

/// sum_i d_{s+i} base^{-(i+1)} over the window, complemented if `flip`.
double digits_value(const std::vector<std::uint8_t>& d, std::size_t s, std::size_t len, int base, bool flip) {
  double v = 0.0;
  const double b = static_cast<double>(base);
  for (std::size_t i = len; i-- > 0;) {
    const int digit = flip ? 1 - d[s + i] : d[s + i];
    v = (v + digit) / b;
  }
  return v;
}

std::vector<double> coordinate_orbit(const DynamicalSystem& f, const Start1D& start, std::size_t n) {
  std::vector<double> out(n);
  if (n == 0) return out;
  if (f.symbolic() && start.form == Start1D::Form::digits) {
    const int base = digit_base(f);
    const std::size_t len = window_length(base);
    const bool tent = f.kind() == MapKind::tent;
    for (std::size_t s = 0; s < n; ++s) {
      const bool flip = tent && s > 0 && start.digits[s - 1] == 1;
      out[s] = digits_value(start.digits, s, len, base, flip);
    }
    return out;
  }
  if (f.symbolic()) {
    std::uint64_t p, q;
    if (start.form == Start1D::Form::rational) {
      p = start.p;
      q = start.q;
    } else {
      q = kDyadicDen;
      p = static_cast<std::uint64_t>(std::ldexp(f.kind() == MapKind::tent ? start.x : wrap_unit(start.x), kDyadicBits));
    }
    if (f.kind() == MapKind::mul) {
      const auto k = static_cast<u128>(f.mul_factor());
      for (std::size_t s = 0; s < n; ++s) {
        out[s] = static_cast<double>(p) / static_cast<double>(q);
        p = static_cast<std::uint64_t>((k * p) % q);
      }
    } else {
      for (std::size_t s = 0; s < n; ++s) {
        out[s] = static_cast<double>(p) / static_cast<double>(q);
        p = (2 * static_cast<u128>(p) <= q) ? 2 * p : 2 * (q - p);
      }
    }
    return out;
  }
  double x = start.form == Start1D::Form::rational ? static_cast<double>(start.p) / static_cast<double>(start.q)
                                                    : start.x;
  for (std::size_t s = 0; s < n; ++s) {
    out[s] = x;
    x = f.apply({x, 0.0})[0];
  }
  return out;
}

Start1D draw_start(const DynamicalSystem& f, Sampler sampler, std::mt19937_64& rng, std::size_t lattice_index,
                   std::size_t lattice_count, std::size_t n) {
  Start1D s;
  if (sampler == Sampler::lattice) {
    s.form = Start1D::Form::rational;
    s.p = 2 * lattice_index + 1;
    s.q = 2 * lattice_count;
    s.value = static_cast<double>(s.p) / static_cast<double>(s.q);
    return s;
  }
  if (sampler == Sampler::bernoulli_mixture && !(f.kind() == MapKind::mul && f.mul_factor() == 2)) {
    throw std::invalid_argument("bernoulli_mixture sampler needs mul_2");
  }
  if (sampler == Sampler::cantor && !(f.kind() == MapKind::mul && f.mul_factor() == 3)) {
    throw std::invalid_argument("cantor sampler needs mul_3");
  }
  if (!f.symbolic()) {
    s.x = unit_double(rng());
    s.value = s.x;
    return s;
  }
  const int base = digit_base(f);
  const std::size_t total = n + window_length(base);
  s.form = Start1D::Form::digits;
  s.digits.resize(total);
  if (sampler == Sampler::bernoulli_mixture) {
    const double p = unit_double(rng());
    for (auto& d : s.digits) d = unit_double(rng()) < p ? 1 : 0;
  } else if (sampler == Sampler::cantor) {
    for (auto& d : s.digits) d = static_cast<std::uint8_t>(2 * (rng() & 1));
  } else {
    for (auto& d : s.digits) d = static_cast<std::uint8_t>(rng() % static_cast<std::uint64_t>(base));
  }
  s.value = digits_value(s.digits, 0, window_length(base), base, false);
  return s;
}

std::size_t lattice_side(std::size_t count) {
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(count))));
  if (side * side != count) throw std::invalid_argument("2D lattice sampler needs a perfect-square count");
  return side;
}

DiscreteMeasure measure_of(const PointSpace& space, const std::vector<Point>& points, std::size_t from,
                           std::size_t to) {
  return DiscreteMeasure::uniform(space, std::span<const Point>(points.data() + from, to - from));
}

}  // namespace

std::string_view to_string(Sampler s) {
  switch (s) {
    case Sampler::uniform: return "uniform";
    case Sampler::lattice: return "lattice";
    case Sampler::bernoulli_mixture: return "bernoulli_mixture";
    case Sampler::cantor: return "cantor";
  }
  return "unknown";
}

Sampler sampler_from_string(std::string_view name) {
  for (Sampler s : {Sampler::uniform, Sampler::lattice, Sampler::bernoulli_mixture, Sampler::cantor}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown sampler: " + std::string(name));
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<Point> orbit(const DynamicalSystem& sys, const Point& x, std::size_t n) {
  std::vector<Point> out(n);
  if (sys.kind() == MapKind::product || sys.dimension() == 1) {
    const DynamicalSystem& f = sys.kind() == MapKind::product ? sys.first() : sys;
    Start1D a;
    a.x = x[0];
    const auto xs = coordinate_orbit(f, a, n);
    std::vector<double> ys(n, 0.0);
    if (sys.kind() == MapKind::product) {
      Start1D b;
      b.x = x[1];
      ys = coordinate_orbit(sys.second(), b, n);
    }
    for (std::size_t k = 0; k < n; ++k) out[k] = {xs[k], ys[k]};
    return out;
  }
  Point y = sys.space().reduce(x);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = y;
    y = sys.apply(y);
  }
  return out;
}

DiscreteMeasure empirical_measure(const DynamicalSystem& sys, const Point& x, std::size_t n) {
  if (n == 0) throw std::invalid_argument("empirical measure needs n >= 1");
  return DiscreteMeasure::uniform(sys.space(), orbit(sys, x, n));
}

SampledOrbit sample_orbit(const DynamicalSystem& sys, Sampler sampler, std::uint64_t seed, std::size_t index,
                          std::size_t count, std::size_t n) {
  std::mt19937_64 rng(stream_seed(seed, index));
  SampledOrbit result;
  if (sys.kind() == MapKind::product || sys.dimension() == 1) {
    const bool product = sys.kind() == MapKind::product;
    std::size_t ia = index, ib = 0, ca = count, cb = 1;
    if (product && sampler == Sampler::lattice) {
      const std::size_t side = lattice_side(count);
      ia = index % side;
      ib = index / side;
      ca = cb = side;
    }
    const DynamicalSystem& f = product ? sys.first() : sys;
    const Start1D a = draw_start(f, sampler, rng, ia, ca, n);
    const auto xs = coordinate_orbit(f, a, n);
    std::vector<double> ys(n, 0.0);
    result.start = {a.value, 0.0};
    if (product) {
      const Start1D b = draw_start(sys.second(), sampler, rng, ib, cb, n);
      ys = coordinate_orbit(sys.second(), b, n);
      result.start[1] = b.value;
    }
    result.points.resize(n);
    for (std::size_t k = 0; k < n; ++k) result.points[k] = {xs[k], ys[k]};
    return result;
  }
  if (sampler == Sampler::lattice) {
    const std::size_t side = lattice_side(count);
    const double m = static_cast<double>(side);
    result.start = {(static_cast<double>(index % side) + 0.5) / m, (static_cast<double>(index / side) + 0.5) / m};
  } else if (sampler == Sampler::uniform) {
    const double u = unit_double(rng());
    result.start = {u, unit_double(rng())};
  } else {
    throw std::invalid_argument("sampler " + std::string(to_string(sampler)) + " is not defined for " + sys.name());
  }
  result.points = orbit(sys, result.start, n);
  return result;
}

EmpiricalCloud sample_cloud(const DynamicalSystem& sys, std::size_t M, std::size_t n, std::uint64_t seed,
                            const CloudOptions& options) {
  if (M == 0 || n == 0) throw std::invalid_argument("sample_cloud needs M >= 1 and n >= 1");
  const PointSpace space = sys.space();
  const bool two_d = space.box_dimension() == 2;
  std::vector<std::optional<DiscreteMeasure>> members(M);
  std::vector<Point> starts(M);
  std::vector<double> diag(M, 0.0);
  const bool binned_diag = two_d && options.bin_cells == 0 && n > 512;
  parallel_for(M, [&](std::size_t j) {
    SampledOrbit o = sample_orbit(sys, options.reference, seed, j, M, n);
    starts[j] = o.start;
    DiscreteMeasure full = measure_of(space, o.points, 0, n);
    if (options.bin_cells > 0) full = snap_to_grid(full, options.bin_cells);
    if (options.diagnostic) {
      DiscreteMeasure half = measure_of(space, o.points, 0, std::max<std::size_t>(n / 2, 1));
      if (options.bin_cells > 0) {
        diag[j] = w1_distance(snap_to_grid(half, options.bin_cells), full);
      } else if (binned_diag) {
        diag[j] = w1_distance(snap_to_grid(half, 16), snap_to_grid(full, 16));
      } else {
        diag[j] = w1_distance(half, full);
      }
    }
    members[j].emplace(std::move(full));
  });
  EmpiricalCloud cloud{sys, n, seed, options, std::move(starts), {}, {}, 0.0, binned_diag && options.diagnostic};
  cloud.members.reserve(M);
  for (auto& m : members) cloud.members.push_back(std::move(*m));
  if (options.diagnostic) {
    cloud.convergence_diagnostic = compensated_sum(diag) / static_cast<double>(M);
    cloud.diagnostics = std::move(diag);
  }
  return cloud;
}

EmpiricalCloud make_cloud(const DynamicalSystem& sys, std::vector<DiscreteMeasure> members) {
  if (members.empty()) throw std::invalid_argument("a cloud needs at least one member");
  for (const auto& m : members) {
    if (m.space() != sys.space()) throw std::invalid_argument("cloud members must live on the system's space");
  }
  EmpiricalCloud cloud{sys, 0, 0, {}, {}, std::move(members), {}, 0.0, false};
  cloud.options.diagnostic = false;
  return cloud;
}

}  // namespace emlab
