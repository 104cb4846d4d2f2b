#include <doctest.h>

#include "delstab/complex.hpp"
#include "support.hpp"

using namespace delstab;
using testing::pt;

namespace {

PointSet square_fan() {
  return PointSet({pt({0, 0}), pt({1, 0}), pt({1, 1}), pt({0, 1}), pt({0.5, 0.5})});
}

SimplicialComplex fan_complex() {
  return SimplicialComplex::closure({{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {0, 3, 4}});
}

}  // namespace

TEST_CASE("simplex validation and faces") {
  CHECK_THROWS_AS(Simplex(std::vector<VertexId>{}), PreconditionError);
  CHECK_THROWS_AS(Simplex({1, 1}), PreconditionError);
  Simplex s{3, 1, 2};
  CHECK(s.ids() == std::vector<VertexId>{1, 2, 3});
  CHECK(s.facets().size() == 3);
  CHECK(Simplex{1, 3}.is_face_of(s));
  CHECK(s.intersection(Simplex{3, 4}) == Simplex{3});
}

TEST_CASE("closure of a triangle") {
  auto k = SimplicialComplex::closure({{0, 1, 2}});
  CHECK(k.size() == 7);
  CHECK(k.is_downward_closed());
  CHECK(k.dim() == 2);
}

TEST_CASE("star of a vertex set") {
  auto k = SimplicialComplex::closure({{0, 1, 2}, {1, 2, 3}});
  auto st = star(k, {0});
  CHECK(st == SimplicialComplex::closure({{0, 1, 2}}));
  CHECK(star(k, {1}) == k);
  CHECK_THROWS_AS(star(k, std::vector<VertexId>{}), PreconditionError);
  // The star of the star reaches every simplex meeting the first star's vertices.
  auto twice = star(k, std::span<const VertexId>(st.vertices()));
  CHECK(twice == k);
}

TEST_CASE("boundary of two triangles") {
  auto k = SimplicialComplex::closure({{0, 1, 2}, {1, 2, 3}});
  auto bd = boundary_complex(k);
  CHECK(bd.of_dim(1).size() == 4);
  CHECK_FALSE(bd.contains(Simplex{1, 2}));
  CHECK(is_pure(k, 2));
  CHECK_FALSE(is_pure(SimplicialComplex::closure({{0, 1, 2}, {3, 4}}), 2));
}

TEST_CASE("embedding") {
  PointSet p({pt({0, 0}), pt({1, 0}), pt({0, 1}), pt({1, 1}), pt({0.2, 0.2}), pt({2, 2})});
  CHECK(is_embedded(SimplicialComplex::closure({{0, 1, 2}, {1, 2, 3}}), p).embedded);
  auto bad = is_embedded(SimplicialComplex::closure({{0, 1, 2}, {0, 3, 4}}), p);
  CHECK_FALSE(bad.embedded);
  REQUIRE(bad.violation);
  // Crossing diagonals of the unit square.
  CHECK_FALSE(is_embedded(SimplicialComplex::closure({{0, 3}, {1, 2}}), p).embedded);
  CHECK_FALSE(is_embedded(SimplicialComplex::closure({{0, 3}, {1, 2}}), p, Arithmetic::floating).embedded);
  // Degenerate triangle.
  auto deg = is_embedded(SimplicialComplex::closure({{0, 3, 5}}), p);
  CHECK_FALSE(deg.embedded);
  CHECK(deg.violation->first == deg.violation->second);
  // Edges touching only at an endpoint are fine; T-junction is not.
  PointSet t({pt({0, 0}), pt({2, 0}), pt({1, 0}), pt({1, 1})});
  CHECK_FALSE(is_embedded(SimplicialComplex::closure({{0, 1}, {2, 3}}), t).embedded);
  CHECK(is_embedded(SimplicialComplex::closure({{0, 2}, {2, 3}}), t).embedded);
}

TEST_CASE("triangulation at a vertex") {
  auto p = square_fan();
  auto k = fan_complex();
  CHECK(is_triangulation_at(k, p, 4).holds);
  auto corner = is_triangulation_at(k, p, 0);
  CHECK_FALSE(corner.holds);
  CHECK(corner.failed_condition == 3);

  auto missing = is_triangulation_at(SimplicialComplex::closure({{0, 1, 4}}), p, 2);
  CHECK(missing.failed_condition == 1);

  // A foreign triangle overlapping the star interior violates condition 4.
  PointSet q({pt({0, 0}), pt({1, 0}), pt({1, 1}), pt({0, 1}), pt({0.5, 0.5}), pt({0.6, 0.3}),
              pt({0.9, 0.3}), pt({0.7, 0.4})});
  auto k2 = SimplicialComplex::closure({{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {0, 3, 4}, {5, 6, 7}});
  CHECK(is_triangulation_at(k2, q, 4).failed_condition == 4);
}

TEST_CASE("star isomorphism") {
  auto k = fan_complex();
  CHECK(star_isomorphic(k, k, std::vector<VertexId>{4}).isomorphic);
  VertexMap swap{{0, 1}, {1, 0}, {2, 3}, {3, 2}, {4, 4}};
  CHECK(star_isomorphic(k, k, std::vector<VertexId>{4}, swap).isomorphic);
  auto flipped = SimplicialComplex::closure({{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {0, 3}});
  auto rep = star_isomorphic(k, flipped, std::vector<VertexId>{4});
  CHECK_FALSE(rep.isomorphic);
  CHECK(rep.only_in_first.size() >= 1);
  VertexMap partial{{4, 4}};
  CHECK_THROWS_AS(star_isomorphic(k, k, std::vector<VertexId>{4}, partial), PreconditionError);
  VertexMap clash{{0, 1}, {1, 1}, {2, 2}, {3, 3}, {4, 4}};
  CHECK_THROWS_AS(star_isomorphic(k, k, std::vector<VertexId>{4}, clash), PreconditionError);
}
