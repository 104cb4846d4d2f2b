#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "delstab/delaunay.hpp"
#include "delstab/generators.hpp"
#include "delstab/genericity.hpp"
#include "delstab/perturb.hpp"
#include "support.hpp"

using namespace delstab;

namespace {

int cofaces(const SimplicialComplex& k, const Simplex& s) {
  int n = 0;
  for (const auto& t : k.of_dim(s.dim() + 1)) n += s.is_face_of(t);
  return n;
}

}  // namespace

TEST_CASE("delaunay simplices are faces of top simplices and interior ones have two cofaces") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int m = seed <= 4 ? 2 : 3;
    const auto p = testing::random_points(m == 2 ? 40 : 25, m, seed);
    const auto del = delaunay(p);
    REQUIRE(del.generic);
    const auto top = del.complex.of_dim(m);
    const auto boundary = boundary_complex(del.complex);
    CHECK(is_pure(boundary, m - 1));
    for (const auto& s : del.complex) {
      CHECK(std::any_of(top.begin(), top.end(), [&](const Simplex& t) { return s.is_face_of(t); }));
      if (s.dim() < m && !boundary.contains(s)) CHECK(cofaces(del.complex, s) >= 2);
    }
  }
}

TEST_CASE("separation: some top simplex contains tau and avoids q") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto p = testing::random_points(30, 2, seed + 40);
    const auto del = delaunay(p);
    REQUIRE(del.generic);
    const auto top = del.complex.of_dim(2);
    const auto boundary = boundary_complex(del.complex);
    for (const auto& tau : del.complex) {
      if (boundary.contains(tau) || tau.dim() == 2) continue;
      for (VertexId q = 0; q < p.size(); ++q) {
        if (tau.contains(q)) continue;
        CHECK(std::any_of(top.begin(), top.end(),
                          [&](const Simplex& t) { return tau.is_face_of(t) && !t.contains(q); }));
      }
    }
  }
}

TEST_CASE("generic delaunay complexes are triangulations at deep points") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto p = jittered_grid(10, 2, 1.0, 0.25, seed);
    const auto s = sampling_parameters(p);
    const auto del = delaunay(p);
    REQUIRE(del.generic);
    for (auto v : deep_interior(p, s.epsilon)) CHECK(is_triangulation_at(del.complex, p, v).holds);
  }
}

TEST_CASE("protection is positive exactly when the complex is generic") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = delaunay(testing::random_points(30, 2, seed));
    CHECK(d.generic == (d.min_protection() > d.tolerance));
  }
  const auto g = delaunay(testing::grid_points(4, 2));
  CHECK(g.generic == (g.min_protection() > g.tolerance));
}

TEST_CASE("star extraction is idempotent and embedding is order independent") {
  const auto p = testing::random_points(30, 2, 8);
  const auto k = delaunay(p).complex;
  const std::vector<VertexId> q{3, 9, 17};
  CHECK(star(star(k, q), q) == star(k, q));

  // Reverse the vertex order: verdicts must carry over, for a good and a broken complex.
  std::vector<Point> rev(p.begin(), p.end());
  std::reverse(rev.begin(), rev.end());
  const PointSet pr(rev);
  VertexMap flip;
  for (VertexId v = 0; v < p.size(); ++v) flip[v] = p.size() - 1 - v;
  auto relabel = [&](const SimplicialComplex& c) {
    std::vector<Simplex> out;
    for (const auto& s : c) out.push_back(s.mapped(flip));
    return SimplicialComplex::closure(out);
  };
  auto tops = k.of_dim(2);
  tops.push_back(Simplex{0, 1, 2});
  const auto broken = SimplicialComplex::closure(tops);
  CHECK(is_embedded(k, p).embedded);
  CHECK(is_embedded(relabel(k), pr).embedded);
  const auto a = is_embedded(broken, p);
  const auto b = is_embedded(relabel(broken), pr);
  CHECK(a.embedded == b.embedded);
  CHECK(is_embedded(broken, p).violation == a.violation);
}

TEST_CASE("isomorphism verdicts are symmetric under the inverse map") {
  const auto p = jittered_grid(8, 2, 1.0, 0.2, 6);
  const auto k = delaunay(p).complex;
  const auto z = make_point_perturbation(p, 0.3 * p.min_pairwise_distance(), 2, PerturbationModel::uniform);
  const auto k2 = delaunay(z.apply(p)).complex;
  VertexMap id;
  for (VertexId v = 0; v < p.size(); ++v) id[v] = v;
  for (VertexId q : {18u, 27u, 36u, 45u}) {
    const VertexId qs[] = {q};
    CHECK(star_isomorphic(k, k2, qs, id).isomorphic == star_isomorphic(k2, k, qs, inverse(id)).isomorphic);
  }
}
