#include "delstab/hull.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "delstab/predicates.hpp"
#include "subsets.hpp"

namespace delstab {

namespace {

// Returns the facet spanned by `ids` when every other point lies weakly on one side.
std::optional<HullFacet> try_facet(const PointSet& points, const std::vector<VertexId>& ids) {
  const int m = points.dim();
  std::vector<Point> simplex;
  for (auto v : ids) simplex.push_back(points[v]);
  simplex.push_back(Point());

  int side = 0;
  VertexId witness = 0;
  std::vector<VertexId> coplanar = ids;
  for (VertexId q = 0; q < points.size(); ++q) {
    if (std::binary_search(ids.begin(), ids.end(), q)) continue;
    simplex.back() = points[q];
    const int s = orientation(simplex);
    if (s == 0) {
      coplanar.push_back(q);
    } else if (side == 0) {
      side = s;
      witness = q;
    } else if (s != side) {
      return std::nullopt;
    }
  }
  if (side == 0) return std::nullopt;  // ids do not span a hyperplane with the rest

  Matrix e(m, m - 1);
  for (int i = 1; i < m; ++i) e.col(i - 1) = points[ids[i]] - points[ids[0]];
  Eigen::JacobiSVD<Matrix> svd(e, Eigen::ComputeFullU);
  Point n = svd.matrixU().col(m - 1);
  if (n.dot(points[witness] - points[ids[0]]) > 0) n = -n;

  HullFacet f;
  f.normal = n;
  f.offset = n.dot(points[ids[0]]);
  std::sort(coplanar.begin(), coplanar.end());
  f.vertices = std::move(coplanar);
  return f;
}

}  // namespace

ConvexHull ConvexHull::of(const PointSet& points, Exec exec) {
  const std::size_t n = points.size();
  const std::size_t m = static_cast<std::size_t>(points.dim());
  if (n < m + 1 || points.affine_rank() != points.dim())
    throw PreconditionError("convex hull needs a full-dimensional point set");

  std::vector<std::vector<HullFacet>> per_first(n);
  auto scan = [&](std::size_t first) {
    std::vector<VertexId> buf{first};
    detail::for_each_subset(n, m - 1, first + 1, buf, [&](const std::vector<VertexId>& ids) {
      if (auto f = try_facet(points, ids)) per_first[first].push_back(std::move(*f));
    });
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < n; ++i) scan(i);
  } else {
    for (std::size_t i = 0; i < n; ++i) scan(i);
  }

  ConvexHull hull;
  hull.dim_ = points.dim();
  hull.boundary_.assign(n, false);
  std::set<std::vector<VertexId>> seen;
  for (auto& bucket : per_first)
    for (auto& f : bucket) {
      if (!seen.insert(f.vertices).second) continue;
      for (auto v : f.vertices) hull.boundary_[v] = true;
      hull.facets_.push_back(std::move(f));
    }
  return hull;
}

double ConvexHull::distance_to_boundary(const Point& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) best = std::min(best, f.offset - f.normal.dot(x));
  return best;
}

bool ConvexHull::on_boundary(VertexId v) const { return v < boundary_.size() && boundary_[v]; }

}  // namespace delstab
