#pragma once

// Relaxed Delaunay complex: sigma is a member iff some centre c has
// g(c) = max_{p in sigma} |c - p| - min_{q in P} |c - q| <= rho.

#include <span>
#include <vector>

#include "delstab/complex.hpp"

namespace delstab {

/// g(c) for the simplex; 2-Lipschitz in c.
double relaxation_gap(const PointSet& points, const Simplex& s, const Point& c);

struct RelaxedWitness {
  Simplex simplex;
  Point centre;
  double gap = 0.0;
};

struct RelaxedOptions {
  /// Box evaluations per candidate before it is declared undecided.
  std::size_t max_evaluations = 200000;
  Exec exec = Exec::parallel;
};

struct RelaxedResult {
  /// Closure of the accepted candidates (all contain a region vertex).
  SimplicialComplex complex;
  std::vector<RelaxedWitness> witnesses;
  std::vector<Simplex> rejected;
  std::vector<Simplex> undecided;
  /// Every candidate was accepted with a witness or rejected with a certificate.
  bool certified = true;
  /// The search ball around each region vertex provably holds every witness:
  /// rho <= 2 eps and each region vertex lies >= 4 eps inside the hull.
  bool exhaustive = true;
  std::size_t candidates = 0;
};

/// Decides every simplex of dimension <= m that contains a region vertex q and
/// has diameter <= 2(eps + rho). Witnesses are searched in the ball of radius
/// eps + rho about q by branch and bound on boxes, pruning a box when
/// g(centre) - 2 * half_diagonal > rho.
RelaxedResult relaxed_delaunay(const PointSet& points, double rho, std::span<const VertexId> region,
                               double eps, const RelaxedOptions& options = {});

}  // namespace delstab
