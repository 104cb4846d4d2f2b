#pragma once

// Perturbed metrics close to the Euclidean one, metric circumcentres found by
// damped Newton on f_i(c) = d(c, p_i) - d(c, p_0), and metric Delaunay stars.

#include <cstdint>
#include <span>
#include <vector>

#include "delstab/delaunay.hpp"

namespace delstab {

/// Axis-aligned box U.
struct Box {
  Point lo;
  Point hi;

  bool contains(const Point& x) const;
  double distance_to_boundary(const Point& x) const;
  /// Bounding box of the points inflated by `margin` on every side.
  static Box around(const PointSet& points, double margin);
};

struct Wave {
  Point wave_vector;
  Point direction;  // unit
  double phase = 0.0;
};

/// phi(x) = x + t + a * (1/K) sum_w e_w sin(<k_w, x> + phase_w).
class DisplacementField {
 public:
  DisplacementField() = default;
  /// Throws unless the displacement's Lipschitz constant a * max|k| is below 1/2.
  DisplacementField(int dim, double amplitude, std::vector<Wave> waves, Point offset = Point());

  static DisplacementField identity(int dim);
  static DisplacementField translation(const Point& t);
  /// K random plane waves with the given wavelength.
  static DisplacementField sinusoidal(int dim, double amplitude, double wavelength, std::uint64_t seed,
                                      int waves = 3);

  int dim() const { return dim_; }
  Point displacement(const Point& x) const;
  Point apply(const Point& x) const { return x + displacement(x); }
  /// Fixed-point inverse; the displacement is a contraction.
  Point inverse(const Point& y) const;
  Matrix jacobian(const Point& x) const;

  /// Bound on sup |phi(x) - x|.
  double sup_displacement() const;
  double amplitude() const { return amplitude_; }
  double lipschitz() const { return lipschitz_; }
  const std::vector<Wave>& waves() const { return waves_; }

 private:
  int dim_ = 0;
  double amplitude_ = 0.0;
  double lipschitz_ = 0.0;
  std::vector<Wave> waves_;
  Point offset_;
};

enum class MetricKind { euclidean, pullback, additive_noise };

class MetricModel {
 public:
  static MetricModel euclidean(int dim);
  /// d(x, y) = |phi(x) - phi(y)|, a genuine metric with |d - d_E| <= 2 sup|phi - id|.
  static MetricModel pullback(DisplacementField field, Box domain);
  /// d(x, y) = |x - y| + a s(x, y) with |s| <= 1 smooth and symmetric. Only a
  /// pseudo-metric: the triangle inequality is not checked.
  static MetricModel additive_noise(int dim, double amplitude, std::uint64_t seed, Box domain);

  double distance(const Point& x, const Point& y) const;
  /// phi for pullbacks, the identity otherwise.
  Point map(const Point& x) const;

  MetricKind kind() const { return kind_; }
  double rho_bound() const { return rho_bound_; }
  bool is_true_metric() const { return kind_ != MetricKind::additive_noise; }
  const Box& domain() const { return domain_; }
  const DisplacementField& field() const { return field_; }
  int dim() const { return dim_; }

 private:
  MetricKind kind_ = MetricKind::euclidean;
  int dim_ = 0;
  double rho_bound_ = 0.0;
  Box domain_;
  DisplacementField field_;
  double noise_amplitude_ = 0.0;
  Point noise_wave_;
  double noise_phase_ = 0.0;
};

struct MetricCircumcentreOptions {
  /// Sampling radius used for mu0 = L/eps; <= 0 uses the circumradius.
  double eps = 0.0;
  int max_iterations = 60;
};

struct MetricCircumcentre {
  bool found = false;
  Point centre;
  double radius = 0.0;
  /// max_i d(c, p_i) - min_i d(c, p_i).
  double spread = 0.0;
  double search_radius = 0.0;
  /// rho_bound <= thickness * L / 8, the regime where a root is guaranteed.
  bool within_hypothesis = false;
  int starts = 0;
};

/// Root of f inside |c - C(s)| <= 8 rho/(thickness mu0) + slack, seeded at the
/// Euclidean circumcentre and then from a 3^m grid of starts.
MetricCircumcentre metric_circumcentre(const SimplexGeometry& s, const MetricModel& d,
                                       const MetricCircumcentreOptions& options = {});

struct MetricDelaunayResult {
  /// Accepted m-simplices with a region vertex, their faces, and metric balls.
  DelaunayResult result;
  std::vector<Simplex> not_found;
  bool certified = true;
  std::size_t candidates = 0;
};

/// Generic path: candidates are (m+1)-subsets with a region vertex and
/// Euclidean diameter <= 2 eps + 4 rho_bound.
MetricDelaunayResult metric_delaunay(const PointSet& points, const MetricModel& d,
                                     std::span<const VertexId> region, double eps,
                                     Exec exec = Exec::parallel);

/// Pullback path: the star of the region in Del(phi(P)), pulled back through
/// the vertex bijection.
MetricDelaunayResult metric_delaunay_pullback(const PointSet& points, const MetricModel& d,
                                              std::span<const VertexId> region);

}  // namespace delstab
