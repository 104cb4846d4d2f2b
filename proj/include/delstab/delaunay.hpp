#pragma once

#include <optional>
#include <span>
#include <vector>

#include "delstab/complex.hpp"
#include "delstab/geometry.hpp"
#include "delstab/types.hpp"

namespace delstab {

/// Circumball of a Delaunay m-simplex with its signed protection margin
/// min_{q not in simplex} |q - centre| - radius.
struct DelaunayBall {
  Simplex simplex;
  Point centre;
  double radius = 0.0;
  double protection = 0.0;
};

struct DelaunayResult {
  SimplicialComplex complex;
  /// One record per Delaunay m-simplex, sorted by simplex.
  std::vector<DelaunayBall> balls;
  /// Vertex groups of more than m+1 points on a common empty sphere.
  std::vector<Simplex> cospherical_groups;
  bool generic = true;
  /// Cosphericality tolerance tau = 1e-9 * diameter.
  double tolerance = 0.0;

  const DelaunayBall* ball(const Simplex& s) const;
  /// Minimum protection over all m-simplices (+inf when there are none).
  double min_protection() const;
  std::vector<Simplex> top_simplices() const;
};

double delaunay_tolerance(const PointSet& points);

/// Throws PreconditionError unless n >= m+1 and aff(points) = R^m.
void require_full_dimensional(const PointSet& points);

/// Signed protection margin of `s` with respect to the ball.
double protection_margin(const PointSet& points, const Simplex& s, const Circumball& ball);

/// Enumerates every (m+1)-subset and keeps those whose circumball holds no
/// point deeper than tau. Exec::parallel splits the enumeration with OpenMP.
DelaunayResult delaunay_bruteforce(const PointSet& points, Exec exec = Exec::parallel);

/// Gift-wrapping of the lower hull of the points lifted to the paraboloid.
DelaunayResult delaunay_lifted(const PointSet& points);

/// Default construction used by the rest of the library.
inline DelaunayResult delaunay(const PointSet& points) { return delaunay_lifted(points); }

}  // namespace delstab
