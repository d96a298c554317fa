#include "emlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace emlab {

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

DiscreteMeasure::DiscreteMeasure(PointSpace space, std::vector<Atom> atoms)
    : space_(space), atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("measure needs at least one atom");
  std::vector<double> weights;
  weights.reserve(atoms_.size());
  for (auto& a : atoms_) {
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
      throw std::invalid_argument("atom weights must be finite and non-negative");
    }
    a.point = space_.reduce(a.point);
    weights.push_back(a.weight);
  }
  double total = compensated_sum(weights);
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::invalid_argument("atom weights sum to " + std::to_string(total) + ", expected 1");
  }

  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.point < b.point; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < atoms_.size();) {
    std::size_t j = i;
    weights.clear();
    while (j < atoms_.size() && atoms_[j].point == atoms_[i].point) weights.push_back(atoms_[j++].weight);
    const double w = compensated_sum(weights);
    if (w > 0.0) atoms_[out++] = Atom{atoms_[i].point, w};
    i = j;
  }
  atoms_.resize(out);
}

DiscreteMeasure DiscreteMeasure::dirac(PointSpace space, Point p) {
  return DiscreteMeasure(space, {Atom{p, 1.0}});
}

DiscreteMeasure DiscreteMeasure::uniform(PointSpace space, std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("uniform measure over an empty set");
  const double w = 1.0 / static_cast<double>(points.size());
  std::vector<Atom> atoms;
  atoms.reserve(points.size());
  for (const auto& p : points) atoms.push_back(Atom{p, w});
  return DiscreteMeasure(space, std::move(atoms));
}

DiscreteMeasure DiscreteMeasure::lebesgue(PointSpace space, std::size_t count) {
  if (count == 0) throw std::invalid_argument("lebesgue discretization needs atoms");
  std::vector<Point> points;
  if (space.box_dimension() == 1) {
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      points.push_back({(static_cast<double>(i) + 0.5) / static_cast<double>(count), 0.0});
    }
  } else {
    auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(count))));
    side = std::max<std::size_t>(side, 1);
    points.reserve(side * side);
    for (std::size_t i = 0; i < side; ++i) {
      for (std::size_t j = 0; j < side; ++j) {
        points.push_back({(static_cast<double>(i) + 0.5) / static_cast<double>(side),
                          (static_cast<double>(j) + 0.5) / static_cast<double>(side)});
      }
    }
  }
  return uniform(space, points);
}

DiscreteMeasure snap_to_grid(const DiscreteMeasure& mu, std::size_t cells) {
  if (cells == 0) throw std::invalid_argument("snap_to_grid needs at least one cell");
  const double n = static_cast<double>(cells);
  auto snap = [&](double x) {
    const double c = std::min(std::floor(x * n), n - 1.0);
    return (c + 0.5) / n;
  };
  const bool two_d = mu.space().box_dimension() == 2;
  std::vector<Atom> atoms;
  atoms.reserve(mu.size());
  for (const auto& a : mu.atoms()) {
    atoms.push_back(Atom{{snap(a.point[0]), two_d ? snap(a.point[1]) : 0.0}, a.weight});
  }
  return DiscreteMeasure(mu.space(), std::move(atoms));
}

void write_csv(std::ostream& out, const DiscreteMeasure& mu) {
  const bool two_d = mu.space().box_dimension() == 2;
  out << "space=" << to_string(mu.space().kind()) << '\n';
  char buf[128];
  for (const auto& a : mu.atoms()) {
    if (two_d) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", a.point[0], a.point[1], a.weight);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", a.point[0], a.weight);
    }
    out << buf;
  }
}

std::string to_csv(const DiscreteMeasure& mu) {
  std::ostringstream os;
  write_csv(os, mu);
  return os.str();
}

DiscreteMeasure read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("space=", 0) != 0) {
    throw std::invalid_argument("measure csv: missing `space=` header");
  }
  const PointSpace space(space_kind_from_string(line.substr(6)));
  const std::size_t fields = space.box_dimension() == 2 ? 3 : 2;

  std::vector<Atom> atoms;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      std::size_t used = 0;
      double v = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument("measure csv: bad number `" + cell + "`");
      values.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (values.size() != fields) throw std::invalid_argument("measure csv: wrong field count");
    Point p{values[0], fields == 3 ? values[1] : 0.0};
    atoms.push_back(Atom{p, values.back()});
  }
  return DiscreteMeasure(space, std::move(atoms));
}

}  // namespace emlab
