#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "emlab/space.hpp"

namespace emlab {

/// Tolerance on the total mass of a probability measure.
inline constexpr double kMassTolerance = 1e-12;

struct Atom {
  Point point;
  double weight;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finitely supported probability measure on a PointSpace.
///
/// Always held in canonical form: coordinates reduced into the space, atoms
/// sorted lexicographically, equal points merged, zero-weight atoms dropped.
/// Construction throws std::invalid_argument if weights are negative or do
/// not sum to one within kMassTolerance.
class DiscreteMeasure {
 public:
  DiscreteMeasure(PointSpace space, std::vector<Atom> atoms);

  static DiscreteMeasure dirac(PointSpace space, Point p);
  /// Equal weights 1/n on the given points (repeats are merged).
  static DiscreteMeasure uniform(PointSpace space, std::span<const Point> points);
  /// Midpoint discretization of Lebesgue measure. On 2D spaces `atoms` is
  /// rounded to the nearest perfect square.
  static DiscreteMeasure lebesgue(PointSpace space, std::size_t atoms = 10000);

  const PointSpace& space() const { return space_; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  PointSpace space_;
  std::vector<Atom> atoms_;
};

/// Moves every atom to the center of its cell in a grid with `cells` cells
/// per axis. The W1 displacement is at most half a cell diagonal.
DiscreteMeasure snap_to_grid(const DiscreteMeasure& mu, std::size_t cells);

/// Sum with Neumaier compensation.
double compensated_sum(std::span<const double> values);

/// CSV form: a header line `space=<kind>` followed by rows `x[,y],weight`
/// printed with 17 significant digits.
void write_csv(std::ostream& out, const DiscreteMeasure& mu);
DiscreteMeasure read_csv(std::istream& in);
std::string to_csv(const DiscreteMeasure& mu);

}  // namespace emlab
