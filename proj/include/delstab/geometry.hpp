#pragma once

// Simplex geometry: circumballs, altitudes, thickness, singular values of
// the edge matrix, principal angles between flats, and the almost-centre
// bounds used by the perturbation analysis.

#include <optional>
#include <span>
#include <vector>

#include "delstab/types.hpp"

namespace delstab {

/// Relative rank threshold: a simplex is degenerate when s_j < kRankTolerance * s_1.
inline constexpr double kRankTolerance = 1e-12;

/// A j-simplex given by j+1 vertices. Vertices need not be affinely independent.
struct SimplexGeometry {
  std::vector<Point> vertices;

  int dim() const { return static_cast<int>(vertices.size()) - 1; }
  int ambient_dim() const { return vertices.empty() ? 0 : static_cast<int>(vertices[0].size()); }
};

struct Circumball {
  Point centre;
  double radius = 0.0;
};

struct SimplexMetrics {
  double longest_edge = 0.0;
  double shortest_edge = 0.0;
  std::optional<Circumball> circumball;
  std::vector<double> altitudes;
  double thickness = 0.0;
  /// Singular values of the edge matrix, non-increasing, padded with zeros to j entries.
  Eigen::VectorXd singular_values;
  bool degenerate = false;
};

/// Affine flat given by a base point and an orthonormal basis (columns).
struct FlatSubspace {
  Point base;
  Matrix basis;

  int dim() const { return static_cast<int>(basis.cols()); }
  Point project(const Point& x) const;
  double distance(const Point& x) const;

  /// Affine hull of the given points; rank decided with kRankTolerance.
  static FlatSubspace affine_hull(std::span<const Point> points);
  /// Flat through `base` spanned by the columns of `directions` (orthonormalised).
  static FlatSubspace spanned(const Point& base, const Matrix& directions);
};

/// m x j matrix whose columns are p_i - p_0.
Matrix edge_matrix(const SimplexGeometry& s);

/// Singular values of `a`, non-increasing, padded with zeros to a.cols() entries.
Eigen::VectorXd singular_values(const Matrix& a);

double distance_to_affine_hull(const Point& x, std::span<const Point> points);

/// Centre and radius of the smallest circumscribing ball, or nullopt when the
/// vertices do not lie on a common sphere. Requires j >= 1.
std::optional<Circumball> circumcentre(const SimplexGeometry& s);

SimplexMetrics simplex_metrics(const SimplexGeometry& s);

/// Minimum altitude over (j * longest edge); 1 for a vertex, 0 when degenerate.
double thickness(const SimplexGeometry& s);

struct SingularValueCheck {
  double smallest = 0.0;  // s_j
  double bound = 0.0;     // sqrt(j) * thickness * longest edge
  bool holds = false;
};
SingularValueCheck verify_singular_value_bound(const SimplexGeometry& s);

/// Largest principal angle between the direction spaces of u and v, in [0, pi/2].
double subspace_angle(const FlatSubspace& u, const FlatSubspace& v);

struct WhitneyCheck {
  double sin_angle = 0.0;
  double eta = 0.0;    // max vertex distance to the flat
  double bound = 0.0;  // 2 eta / (thickness * longest edge)
  bool holds = false;
};
WhitneyCheck whitney_bound_check(const SimplexGeometry& s, const FlatSubspace& h);

struct AlmostCentreCheck {
  double dist_to_normal_flat = 0.0;
  double bound_squared = 0.0;  // xi^2 / (2 thickness longest_edge)
  double bound_centre = 0.0;   // eps~ xi / (thickness longest_edge)
  bool holds = false;
};
/// Distance from x to the flat of circumscribing-ball centres, with the two
/// thickness-based upper bounds evaluated at x.
AlmostCentreCheck almost_centre_distance(const SimplexGeometry& s, const Point& x);

struct MunkresCheck {
  double munkres_thickness = 0.0;  // inradius at barycentre / longest edge
  double scaled_thickness = 0.0;   // j/(j+1) * thickness
  bool holds = false;
};
MunkresCheck munkres_relation_check(const SimplexGeometry& s);

}  // namespace delstab
