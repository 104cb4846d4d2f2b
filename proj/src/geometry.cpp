#include "delstab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace delstab {

namespace {

Matrix orthonormal_range(const Matrix& a) {
  if (a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > kRankTolerance * s(0)) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

void require_nondegenerate(const SimplexMetrics& m, const char* what) {
  if (m.degenerate) throw PreconditionError(std::string(what) + ": degenerate simplex");
}

}  // namespace

Point FlatSubspace::project(const Point& x) const {
  return base + basis * (basis.transpose() * (x - base));
}

double FlatSubspace::distance(const Point& x) const { return (x - project(x)).norm(); }

FlatSubspace FlatSubspace::affine_hull(std::span<const Point> points) {
  if (points.empty()) throw PreconditionError("affine hull of an empty point list");
  Matrix diffs(points[0].size(), static_cast<Eigen::Index>(points.size() - 1));
  for (std::size_t i = 1; i < points.size(); ++i) diffs.col(i - 1) = points[i] - points[0];
  return {points[0], orthonormal_range(diffs)};
}

FlatSubspace FlatSubspace::spanned(const Point& base, const Matrix& directions) {
  return {base, orthonormal_range(directions)};
}

Matrix edge_matrix(const SimplexGeometry& s) {
  const int j = s.dim();
  Matrix p(s.ambient_dim(), std::max(j, 0));
  for (int i = 1; i <= j; ++i) p.col(i - 1) = s.vertices[i] - s.vertices[0];
  return p;
}

Eigen::VectorXd singular_values(const Matrix& a) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a.cols());
  if (a.size() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  out.head(s.size()) = s;
  return out;
}

double distance_to_affine_hull(const Point& x, std::span<const Point> points) {
  return FlatSubspace::affine_hull(points).distance(x);
}

std::optional<Circumball> circumcentre(const SimplexGeometry& s) {
  const int j = s.dim();
  if (j < 1) throw PreconditionError("circumcentre needs at least two vertices");
  const Point& p0 = s.vertices[0];
  const Matrix p = edge_matrix(s);
  double longest = 0.0;
  for (std::size_t a = 0; a < s.vertices.size(); ++a)
    for (std::size_t b = a + 1; b < s.vertices.size(); ++b)
      longest = std::max(longest, (s.vertices[a] - s.vertices[b]).norm());
  if (longest == 0.0) return std::nullopt;

  // P^T z = b with b_i = |p_i - p_0|^2 / 2; the minimum-norm solution puts
  // the centre p_0 + z in aff(s), which gives the smallest circumscribing ball.
  const Eigen::VectorXd rhs = 0.5 * p.colwise().squaredNorm().transpose();
  Eigen::JacobiSVD<Matrix> svd(p.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankTolerance);
  const Eigen::VectorXd z = svd.solve(rhs);
  if (!z.allFinite()) return std::nullopt;

  Circumball ball{p0 + z, z.norm()};
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& v : s.vertices) {
    const double d = (v - ball.centre).norm();
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (hi - lo > 1e-9 * longest) return std::nullopt;
  return ball;
}

SimplexMetrics simplex_metrics(const SimplexGeometry& s) {
  SimplexMetrics m;
  const int j = s.dim();
  if (j < 0) throw PreconditionError("simplex has no vertices");
  if (j == 0) {
    m.thickness = 1.0;
    return m;
  }

  m.shortest_edge = std::numeric_limits<double>::infinity();
  for (int a = 0; a <= j; ++a)
    for (int b = a + 1; b <= j; ++b) {
      const double d = (s.vertices[a] - s.vertices[b]).norm();
      m.longest_edge = std::max(m.longest_edge, d);
      m.shortest_edge = std::min(m.shortest_edge, d);
    }

  m.singular_values = singular_values(edge_matrix(s));
  const double s1 = m.singular_values(0);
  const double sj = m.singular_values(j - 1);
  m.degenerate = !(s1 > 0.0) || sj < kRankTolerance * s1;

  m.altitudes.resize(j + 1);
  std::vector<Point> face;
  face.reserve(j);
  for (int i = 0; i <= j; ++i) {
    face.clear();
    for (int k = 0; k <= j; ++k)
      if (k != i) face.push_back(s.vertices[k]);
    m.altitudes[i] = distance_to_affine_hull(s.vertices[i], face);
  }

  if (m.degenerate) {
    m.thickness = 0.0;
  } else {
    const double min_alt = *std::min_element(m.altitudes.begin(), m.altitudes.end());
    m.thickness = std::clamp(min_alt / (j * m.longest_edge), 0.0, 1.0);
  }
  m.circumball = circumcentre(s);
  return m;
}

double thickness(const SimplexGeometry& s) { return simplex_metrics(s).thickness; }

SingularValueCheck verify_singular_value_bound(const SimplexGeometry& s) {
  if (s.dim() < 1) throw PreconditionError("singular value bound needs j >= 1");
  const auto m = simplex_metrics(s);
  require_nondegenerate(m, "singular value bound");
  const int j = s.dim();
  SingularValueCheck c;
  c.smallest = m.singular_values(j - 1);
  c.bound = std::sqrt(static_cast<double>(j)) * m.thickness * m.longest_edge;
  c.holds = c.smallest >= c.bound - 1e-9 * m.longest_edge;
  return c;
}

double subspace_angle(const FlatSubspace& u, const FlatSubspace& v) {
  if (u.dim() > v.dim())
    throw PreconditionError("subspace_angle: dim U = " + std::to_string(u.dim()) +
                            " exceeds dim V = " + std::to_string(v.dim()));
  if (u.dim() == 0) return 0.0;
  const Matrix residual = u.basis - v.basis * (v.basis.transpose() * u.basis);
  const double sine = singular_values(residual)(0);
  return std::asin(std::clamp(sine, 0.0, 1.0));
}

WhitneyCheck whitney_bound_check(const SimplexGeometry& s, const FlatSubspace& h) {
  const auto m = simplex_metrics(s);
  require_nondegenerate(m, "whitney bound");
  if (h.dim() < s.dim()) throw PreconditionError("whitney bound: flat dimension below simplex dimension");
  WhitneyCheck c;
  for (const auto& v : s.vertices) c.eta = std::max(c.eta, h.distance(v));
  const auto aff = FlatSubspace::affine_hull(s.vertices);
  c.sin_angle = std::sin(subspace_angle(aff, h));
  c.bound = 2.0 * c.eta / (m.thickness * m.longest_edge);
  c.holds = c.sin_angle <= c.bound + 1e-9;
  return c;
}

AlmostCentreCheck almost_centre_distance(const SimplexGeometry& s, const Point& x) {
  const auto m = simplex_metrics(s);
  require_nondegenerate(m, "almost centre");
  if (!m.circumball) throw PreconditionError("almost centre: simplex has no circumcentre");
  const auto aff = FlatSubspace::affine_hull(s.vertices);

  AlmostCentreCheck c;
  const Point offset = x - m.circumball->centre;
  c.dist_to_normal_flat = (aff.basis.transpose() * offset).norm();

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& v : s.vertices) {
    const double d = (v - x).norm();
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  const double scale = m.thickness * m.longest_edge;
  c.bound_squared = (hi * hi - lo * lo) / (2.0 * scale);
  c.bound_centre = hi * (hi - lo) / scale;
  c.holds = c.dist_to_normal_flat <= std::min(c.bound_squared, c.bound_centre) + 1e-9;
  return c;
}

MunkresCheck munkres_relation_check(const SimplexGeometry& s) {
  const int j = s.dim();
  if (j < 1) throw PreconditionError("munkres relation needs j >= 1");
  const auto m = simplex_metrics(s);
  require_nondegenerate(m, "munkres relation");

  Point barycentre = Point::Zero(s.ambient_dim());
  for (const auto& v : s.vertices) barycentre += v;
  barycentre /= static_cast<double>(j + 1);

  double inradius = std::numeric_limits<double>::infinity();
  std::vector<Point> facet;
  for (int i = 0; i <= j; ++i) {
    facet.clear();
    for (int k = 0; k <= j; ++k)
      if (k != i) facet.push_back(s.vertices[k]);
    inradius = std::min(inradius, distance_to_affine_hull(barycentre, facet));
  }

  MunkresCheck c;
  c.munkres_thickness = inradius / m.longest_edge;
  c.scaled_thickness = static_cast<double>(j) / (j + 1) * m.thickness;
  c.holds = std::abs(c.munkres_thickness - c.scaled_thickness) <= 1e-9 * c.scaled_thickness;
  return c;
}

}  // namespace delstab
