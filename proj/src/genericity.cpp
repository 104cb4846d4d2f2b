#include "delstab/genericity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "subsets.hpp"

namespace delstab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double nearest_distance(const PointSet& points, const Point& x) {
  double best = kInf;
  for (const auto& p : points) best = std::min(best, (p - x).squaredNorm());
  return std::sqrt(best);
}

bool inside_eroded(const ConvexHull& hull, const Point& x, double e, double tol) {
  for (const auto& f : hull.facets())
    if (f.normal.dot(x) > f.offset - e + tol) return false;
  return true;
}

// Vertices of D_e: intersections of m eroded facet hyperplanes inside all the others.
std::vector<Point> eroded_vertices(const ConvexHull& hull, double e, double tol) {
  const auto& facets = hull.facets();
  const int m = hull.dim();
  std::vector<Point> out;
  Matrix a(m, m);
  Eigen::VectorXd b(m);
  std::vector<VertexId> buf;
  detail::for_each_subset(facets.size(), m, 0, buf, [&](const std::vector<VertexId>& ids) {
    for (int i = 0; i < m; ++i) {
      a.row(i) = facets[ids[i]].normal.transpose();
      b(i) = facets[ids[i]].offset - e;
    }
    Eigen::PartialPivLU<Matrix> lu(a);
    if (std::abs(lu.determinant()) < 1e-12) return;
    Point x = lu.solve(b);
    if (inside_eroded(hull, x, e, tol)) out.push_back(std::move(x));
  });
  return out;
}

Matrix hyperplane_basis(const Point& normal) {
  const int m = static_cast<int>(normal.size());
  Eigen::JacobiSVD<Matrix> svd(Matrix(normal), Eigen::ComputeFullU);
  return svd.matrixU().rightCols(m - 1);
}

}  // namespace

double eroded_hull_coverage(const PointSet& points, const ConvexHull& hull, const DelaunayResult& del,
                            double e, double pitch) {
  const double tol = 1e-9 * points.diameter();
  double best = 0.0;
  for (const auto& b : del.balls)
    if (hull.distance_to_boundary(b.centre) >= e) best = std::max(best, b.radius);

  const auto vertices = eroded_vertices(hull, e, tol);
  for (const auto& v : vertices) best = std::max(best, nearest_distance(points, v));

  const auto& facets = hull.facets();
  const int m = hull.dim();
  const int nf = static_cast<int>(facets.size());
#pragma omp parallel for schedule(dynamic, 1) reduction(max : best)
  for (int fi = 0; fi < nf; ++fi) {
    const auto& f = facets[fi];
    const Point base = f.normal * (f.offset - e);
    const Matrix basis = hyperplane_basis(f.normal);
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(m - 1, kInf);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(m - 1, -kInf);
    bool any = false;
    for (const auto& v : vertices) {
      if (std::abs(f.normal.dot(v) - (f.offset - e)) > tol) continue;
      const Eigen::VectorXd s = basis.transpose() * (v - base);
      lo = lo.cwiseMin(s);
      hi = hi.cwiseMax(s);
      any = true;
    }
    if (!any) continue;

    std::vector<long> count(m - 1), idx(m - 1, 0);
    for (int k = 0; k < m - 1; ++k) count[k] = static_cast<long>(std::ceil((hi(k) - lo(k)) / pitch)) + 1;
    while (true) {
      Eigen::VectorXd s(m - 1);
      for (int k = 0; k < m - 1; ++k) s(k) = std::min(hi(k), lo(k) + pitch * static_cast<double>(idx[k]));
      const Point y = base + basis * s;
      if (inside_eroded(hull, y, e, tol)) best = std::max(best, nearest_distance(points, y));
      int k = 0;
      while (k < m - 1 && ++idx[k] == count[k]) idx[k++] = 0;
      if (k == m - 1) break;
    }
  }
  return best;
}

SamplingReport sampling_parameters(const PointSet& points, const ConvexHull& hull,
                                   const DelaunayResult& del, const SamplingOptions& options) {
  SamplingReport r;
  r.sparsity = points.min_pairwise_distance();
  const double pitch = options.pitch_fraction * r.sparsity;

  // e -> coverage(e) - e is decreasing, so its sign change is found by bisection.
  double lo = 0.0;
  double hi = eroded_hull_coverage(points, hull, del, 0.0, pitch);
  const double stop = options.relative_precision * hi;
  while (hi - lo > stop) {
    const double mid = 0.5 * (lo + hi);
    if (eroded_hull_coverage(points, hull, del, mid, pitch) >= mid)
      lo = mid;
    else
      hi = mid;
  }
  r.epsilon = hi;
  r.mu0 = r.sparsity / r.epsilon;
  return r;
}

SamplingReport sampling_parameters(const PointSet& points, const SamplingOptions& options) {
  require_full_dimensional(points);
  const auto hull = ConvexHull::of(points);
  const auto del = delaunay_lifted(points);
  return sampling_parameters(points, hull, del, options);
}

std::vector<VertexId> deep_interior(const PointSet& points, const ConvexHull& hull, double eps) {
  const double slack = 1e-12 * points.diameter();
  std::vector<VertexId> out;
  for (VertexId v = 0; v < points.size(); ++v)
    if (hull.distance_to_boundary(points[v]) >= 4.0 * eps - slack) out.push_back(v);
  return out;
}

std::vector<VertexId> deep_interior(const PointSet& points, double eps) {
  return deep_interior(points, ConvexHull::of(points), eps);
}

double GenericityAnalysis::upsilon0() const {
  const double nu = protection.nu_tilde;
  return std::sqrt(3.0) * nu * nu / 4.0;
}

std::vector<Simplex> GenericityAnalysis::safe_top_simplices() const {
  return safe.safe_simplices.of_dim(dim());
}

GenericityAnalysis classify_generic(const PointSet& points, std::span<const VertexId> pj,
                                    const SamplingReport& sampling) {
  if (pj.empty()) throw PreconditionError("P_J must not be empty");
  GenericityAnalysis a;
  a.points = points;
  a.sampling = sampling;
  a.hull = ConvexHull::of(points);
  a.delaunay = delaunay_lifted(points);
  const double eps = sampling.epsilon;

  a.safe.deep = deep_interior(points, a.hull, eps);
  a.safe.selected.assign(pj.begin(), pj.end());
  std::sort(a.safe.selected.begin(), a.safe.selected.end());
  a.safe.selected.erase(std::unique(a.safe.selected.begin(), a.safe.selected.end()), a.safe.selected.end());
  for (auto v : a.safe.selected)
    if (!std::binary_search(a.safe.deep.begin(), a.safe.deep.end(), v))
      throw PreconditionError("vertex " + std::to_string(v) + " is not a deep interior point");

  a.safe.safe_simplices = star(a.delaunay.complex, a.safe.selected);
  const auto ring_vertices = a.safe.safe_simplices.vertices();
  const auto two_ring = star(a.delaunay.complex, ring_vertices);

  const double tau = a.delaunay.tolerance;
  auto& prot = a.protection;
  prot.tolerance = tau;
  prot.delta_raw = kInf;
  for (const auto& s : two_ring.of_dim(a.dim())) {
    const DelaunayBall* b = a.delaunay.ball(s);
    if (!b) continue;  // a degenerate subset of a cospherical group
    a.safe.audited.push_back(*b);
    prot.per_simplex[s] = b->protection;
    prot.delta_raw = std::min(prot.delta_raw, b->protection);
    if (!(b->radius < eps + tau)) a.safe.audited_radius_below_eps = false;
  }
  for (const auto& g : a.delaunay.cospherical_groups)
    if (two_ring.contains(g)) prot.delta_raw = std::min(prot.delta_raw, 0.0);

  prot.generic = prot.delta_raw > tau;
  prot.delta_global = std::clamp(prot.delta_raw, 0.0, eps);
  prot.nu_tilde = prot.delta_global / eps;
  return a;
}

GenericityAnalysis classify_generic(const PointSet& points, std::span<const VertexId> pj) {
  return classify_generic(points, pj, sampling_parameters(points));
}

ThicknessCertificate thickness_certificate(const GenericityAnalysis& analysis) {
  if (!analysis.protection.generic)
    throw PreconditionError("thickness certificate requires a generic classification");
  ThicknessCertificate c;
  c.nu_tilde = analysis.protection.nu_tilde;
  c.upsilon0 = analysis.upsilon0();
  c.min_thickness = kInf;
  c.valid = true;
  for (const auto& s : analysis.safe.safe_simplices) {
    const double t = thickness(geometry_of(analysis.points, s));
    const bool ok = t >= c.upsilon0 - 1e-9;
    c.witnesses.push_back({s, t, ok});
    c.min_thickness = std::min(c.min_thickness, t);
    c.valid = c.valid && ok;
  }
  c.margin = c.min_thickness - c.upsilon0;
  return c;
}

void CheckCount::record(double margin) {
  (margin > 0.0 ? pass : fail) += 1;
  min_margin = std::min(min_margin, margin);
}

bool LemmaAudit::all_pass() const {
  return generic && separation.fail == 0 && altitude.fail == 0 && circumradius.fail == 0 &&
         thickness.fail == 0;
}

LemmaAudit lemma_audit(const GenericityAnalysis& analysis) {
  LemmaAudit audit;
  audit.sampling = analysis.sampling;
  audit.generic = analysis.protection.generic;
  if (!audit.generic) return audit;

  const auto& points = analysis.points;
  const int m = analysis.dim();
  const double eps = analysis.sampling.epsilon;
  const double tau = analysis.protection.tolerance;
  const double delta = analysis.protection.delta_global;
  audit.delta = delta;
  audit.nu_tilde = analysis.protection.nu_tilde;
  audit.upsilon0 = analysis.upsilon0();
  audit.upsilon0_conservative = audit.upsilon0 / m;
  const double height_bound = std::sqrt(3.0) * delta * delta / (2.0 * eps);

  // Strict inequalities of the lemmas are checked with tau (or 1e-9 for the
  // dimensionless thickness) of slack, so margins are measured - bound + slack.
  for (const auto& s : analysis.safe.safe_simplices) {
    if (s.dim() == 0) continue;
    const auto metrics = simplex_metrics(geometry_of(points, s));
    audit.separation.record(metrics.shortest_edge - delta + tau);
    audit.thickness.record(metrics.thickness - audit.upsilon0 + 1e-9);
    if (s.dim() != m) continue;

    const double min_alt = *std::min_element(metrics.altitudes.begin(), metrics.altitudes.end());
    audit.altitude.record(min_alt - height_bound + tau);
    const DelaunayBall* ball = analysis.delaunay.ball(s);
    AuditedSimplex rec;
    rec.simplex = s;
    rec.radius = ball ? ball->radius : kInf;
    rec.protection = ball ? ball->protection : 0.0;
    rec.thickness = metrics.thickness;
    rec.shortest_edge = metrics.shortest_edge;
    rec.min_altitude = min_alt;
    rec.secure = ball && rec.protection >= delta - tau && rec.thickness >= audit.upsilon0 - 1e-9 &&
                 rec.radius < eps + tau && rec.shortest_edge >= audit.nu_tilde * eps - tau;
    audit.simplices.push_back(rec);
  }

  for (const auto& b : analysis.safe.audited) {
    bool deep_vertex = false;
    for (auto v : b.simplex)
      deep_vertex = deep_vertex || analysis.hull.distance_to_boundary(points[v]) >= 2.0 * eps;
    if (deep_vertex) audit.circumradius.record(eps + tau - b.radius);
  }
  return audit;
}

}  // namespace delstab
