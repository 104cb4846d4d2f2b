#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "delstab/hull.hpp"
#include "support.hpp"

using namespace delstab;
using testing::pt;

TEST_CASE("hull of a square has four facets with outward normals") {
  const PointSet p({pt({0, 0}), pt({2, 0}), pt({2, 2}), pt({0, 2}), pt({1, 1}), pt({1, 0})});
  const auto h = ConvexHull::of(p);
  REQUIRE(h.facets().size() == 4);
  for (const auto& f : h.facets()) {
    CHECK(f.normal.norm() == doctest::Approx(1.0));
    for (const auto& x : p) CHECK(f.normal.dot(x) <= f.offset + 1e-12);
  }
  // The edge midpoint (1,0) lies on the bottom facet.
  const auto bottom = std::find_if(h.facets().begin(), h.facets().end(),
                                   [](const HullFacet& f) { return f.normal(1) < -0.5; });
  REQUIRE(bottom != h.facets().end());
  CHECK(bottom->vertices == std::vector<VertexId>{0, 1, 5});
  CHECK(h.on_boundary(5));
  CHECK_FALSE(h.on_boundary(4));
  CHECK(h.distance_to_boundary(pt({1, 1})) == doctest::Approx(1.0));
  CHECK(h.distance_to_boundary(pt({0.5, 1.2})) == doctest::Approx(0.5));
  CHECK(h.distance_to_boundary(pt({3, 1})) == doctest::Approx(-1.0));
}

TEST_CASE("hull distance matches the half-plane oracle on random sets") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto p = testing::random_points(30, 2, seed);
    const auto h = ConvexHull::of(p);
    const auto serial = ConvexHull::of(p, Exec::serial);
    REQUIRE(h.facets().size() == serial.facets().size());
    // Every facet has all points on its inner side and at least two on it.
    for (const auto& f : h.facets()) {
      int on = 0;
      for (const auto& x : p) {
        const double s = f.normal.dot(x) - f.offset;
        CHECK(s <= 1e-12);
        if (std::abs(s) <= 1e-12) ++on;
      }
      CHECK(on >= 2);
    }
    // Oracle: point with max distance to boundary along random probes.
    const auto q = testing::random_points(50, 2, seed + 100);
    for (const auto& x : q) {
      double oracle = std::numeric_limits<double>::infinity();
      for (const auto& f : serial.facets()) {
        const Point a = p[f.vertices.front()], b = p[f.vertices.back()];
        const Point e = (b - a).normalized();
        const Point n = pt({e(1), -e(0)});
        double s = n.dot(x - a);
        // Orient so that the interior is positive.
        double inner = 0;
        for (const auto& y : p) inner = std::max(inner, std::abs(n.dot(y - a)));
        for (const auto& y : p)
          if (std::abs(n.dot(y - a)) == inner) {
            if (n.dot(y - a) < 0) s = -s;
            break;
          }
        oracle = std::min(oracle, s);
      }
      CHECK(h.distance_to_boundary(x) == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("hull of a cube in three dimensions") {
  const auto p = testing::grid_points(3, 3);
  const auto h = ConvexHull::of(p);
  CHECK(h.dim() == 3);
  REQUIRE(h.facets().size() == 6);
  for (const auto& f : h.facets()) CHECK(f.vertices.size() == 9);
  CHECK(h.distance_to_boundary(pt({1, 1, 1})) == doctest::Approx(1.0));
  CHECK_FALSE(h.on_boundary(13));
}

TEST_CASE("hull rejects affinely deficient input") {
  const PointSet p({pt({0, 0}), pt({1, 1}), pt({2, 2})});
  CHECK_THROWS_AS(ConvexHull::of(p), PreconditionError);
}
