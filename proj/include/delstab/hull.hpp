#pragma once

#include <vector>

#include "delstab/types.hpp"

namespace delstab {

/// Supporting hyperplane n.x = offset of a hull facet; n is the unit outward normal.
struct HullFacet {
  Point normal;
  double offset = 0.0;
  /// Every input point on the hyperplane, sorted.
  std::vector<VertexId> vertices;
};

/// H-representation of conv(P). Facets are found by enumerating m-subsets and
/// testing the remaining points with exact orientation signs.
class ConvexHull {
 public:
  ConvexHull() = default;
  static ConvexHull of(const PointSet& points, Exec exec = Exec::parallel);

  const std::vector<HullFacet>& facets() const { return facets_; }
  int dim() const { return dim_; }

  /// Distance to the boundary for points inside; negative outside.
  double distance_to_boundary(const Point& x) const;
  bool on_boundary(VertexId v) const;

 private:
  std::vector<HullFacet> facets_;
  std::vector<bool> boundary_;
  int dim_ = 0;
};

}  // namespace delstab
