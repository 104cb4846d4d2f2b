#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "delstab/delaunay.hpp"
#include "delstab/generators.hpp"
#include "delstab/genericity.hpp"
#include "delstab/metric.hpp"
#include "support.hpp"

using namespace delstab;
using testing::pt;

namespace {

Point planar_circumcentre(const Point& x, const Point& y, const Point& z) {
  const double d = 2 * (x(0) * (y(1) - z(1)) + y(0) * (z(1) - x(1)) + z(0) * (x(1) - y(1)));
  return pt({(x.squaredNorm() * (y(1) - z(1)) + y.squaredNorm() * (z(1) - x(1)) + z.squaredNorm() * (x(1) - y(1))) / d,
             (x.squaredNorm() * (z(0) - y(0)) + y.squaredNorm() * (x(0) - z(0)) + z.squaredNorm() * (y(0) - x(0))) / d});
}

// Inverts phi by Newton on phi(x) = y with a finite-difference Jacobian.
Point invert(const DisplacementField& f, const Point& y) {
  Point x = y;
  for (int it = 0; it < 50; ++it) {
    const Point r = f.apply(x) - y;
    if (r.norm() < 1e-15) break;
    Matrix j(2, 2);
    for (int k = 0; k < 2; ++k) {
      Point h = Point::Zero(2);
      h(k) = 1e-7;
      j.col(k) = (f.apply(x + h) - f.apply(x - h)) / 2e-7;
    }
    x -= j.partialPivLu().solve(r);
  }
  return x;
}

SimplexGeometry triangle(const Point& a, const Point& b, const Point& c) { return SimplexGeometry{{a, b, c}}; }

std::vector<Simplex> star_top(const DelaunayResult& del, std::span<const VertexId> region, int m) {
  return star(del.complex, region).of_dim(m);
}

}  // namespace

TEST_CASE("displacement field bounds") {
  CHECK_THROWS_AS(DisplacementField::sinusoidal(2, 0.1, 1.0, 1), PreconditionError);  // a|k| = 0.63
  const auto f = DisplacementField::sinusoidal(2, 0.05, 1.0, 4);
  CHECK(f.lipschitz() < 0.5);
  CHECK(f.sup_displacement() <= 0.05 + 1e-15);
  const auto probes = testing::random_points(200, 2, 9);
  for (const auto& x : probes) {
    const Point y = 3.0 * x;
    CHECK(f.displacement(y).norm() <= 0.05 + 1e-15);
    CHECK((f.inverse(f.apply(y)) - y).norm() < 1e-12);
    Matrix fd(2, 2);
    for (int k = 0; k < 2; ++k) {
      Point h = Point::Zero(2);
      h(k) = 1e-6;
      fd.col(k) = (f.apply(y + h) - f.apply(y - h)) / 2e-6;
    }
    CHECK((f.jacobian(y) - fd).norm() < 1e-7);
  }
}

TEST_CASE("metric models stay within their deviation bounds") {
  const Box box{pt({-1, -1}), pt({4, 4})};
  const auto pull = MetricModel::pullback(DisplacementField::sinusoidal(2, 0.04, 0.9, 2), box);
  const auto noise = MetricModel::additive_noise(2, 0.03, 5, box);
  CHECK(pull.rho_bound() == doctest::Approx(0.08));
  CHECK(noise.rho_bound() == doctest::Approx(0.03));
  CHECK(pull.is_true_metric());
  CHECK_FALSE(noise.is_true_metric());
  const auto a = testing::random_points(60, 2, 1);
  const auto b = testing::random_points(60, 2, 2);
  const auto c = testing::random_points(60, 2, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Point x = 3 * a[i], y = 3 * b[i], z = 3 * c[i];
    const double de = (x - y).norm();
    CHECK(std::abs(pull.distance(x, y) - de) <= pull.rho_bound() + 1e-12);
    CHECK(std::abs(noise.distance(x, y) - de) <= noise.rho_bound() + 1e-12);
    CHECK(noise.distance(x, y) == doctest::Approx(noise.distance(y, x)));
    CHECK(noise.distance(x, x) == 0.0);
    CHECK(pull.distance(x, z) <= pull.distance(x, y) + pull.distance(y, z) + 1e-12);
  }
}

TEST_CASE("metric circumcentre in the euclidean and translated metrics") {
  const auto s = triangle(pt({0.1, 0.0}), pt({1.2, 0.2}), pt({0.4, 0.9}));
  const Point c = planar_circumcentre(s.vertices[0], s.vertices[1], s.vertices[2]);
  const Box box{pt({-5, -5}), pt({5, 5})};
  const auto e = metric_circumcentre(s, MetricModel::euclidean(2));
  REQUIRE(e.found);
  CHECK((e.centre - c).norm() < 1e-10);
  const auto t = metric_circumcentre(s, MetricModel::pullback(DisplacementField::translation(pt({3, -2})), box));
  REQUIRE(t.found);
  CHECK((t.centre - c).norm() < 1e-10);
  CHECK(t.within_hypothesis);
}

TEST_CASE("metric circumcentre matches the pullback identity") {
  const Box box{pt({-5, -5}), pt({5, 5})};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto f = DisplacementField::sinusoidal(2, 0.002, 1.5, seed);
    const auto d = MetricModel::pullback(f, box);
    const auto q = testing::random_points(3, 2, seed + 50);
    const auto s = triangle(q[0], q[1], q[2]);
    const auto sm = simplex_metrics(s);
    if (sm.thickness < 0.1) continue;
    const auto r = metric_circumcentre(s, d);
    REQUIRE(r.found);
    const Point oracle = invert(f, planar_circumcentre(f.apply(q[0]), f.apply(q[1]), f.apply(q[2])));
    CHECK((r.centre - oracle).norm() < 1e-8);
    const Point c = planar_circumcentre(q[0], q[1], q[2]);
    const double mu0 = sm.shortest_edge / sm.circumball->radius;
    CHECK((r.centre - c).norm() < 8 * d.rho_bound() / (sm.thickness * mu0));
    CHECK(r.spread < 1e-9 * sm.circumball->radius);
  }
}

TEST_CASE("metric circumcentre rejects degenerate simplices") {
  const auto s = triangle(pt({0, 0}), pt({1, 1}), pt({2, 2}));
  CHECK_THROWS_AS(metric_circumcentre(s, MetricModel::euclidean(2)), PreconditionError);
}

TEST_CASE("metric delaunay reduces to the euclidean star") {
  const auto p = jittered_grid(8, 2, 1.0, 0.2, 2);
  const auto eps = sampling_parameters(p).epsilon;
  const std::vector<VertexId> region{27, 28, 35, 36};
  const auto brute = delaunay_bruteforce(p, Exec::serial);
  const auto expected = star_top(brute, region, 2);

  const auto e = metric_delaunay(p, MetricModel::euclidean(2), region, eps);
  CHECK(e.certified);
  CHECK(e.result.top_simplices() == expected);

  const auto box = Box::around(p, 3 * eps);
  const auto id = MetricModel::pullback(DisplacementField::identity(2), box);
  CHECK(metric_delaunay(p, id, region, eps).result.top_simplices() == expected);
  CHECK(metric_delaunay_pullback(p, id, region).result.top_simplices() == expected);
}

TEST_CASE("metric delaunay agrees with the delaunay complex of the mapped points") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto p = jittered_grid(8, 2, 1.0, 0.25, seed);
    const auto eps = sampling_parameters(p).epsilon;
    const std::vector<VertexId> region{27, 36};
    const auto f = DisplacementField::sinusoidal(2, 0.03, 2.0, seed);
    const auto d = MetricModel::pullback(f, Box::around(p, 3 * eps));
    std::vector<Point> mapped;
    for (const auto& x : p) mapped.push_back(f.apply(x));
    const auto oracle = star_top(delaunay_bruteforce(PointSet(mapped), Exec::serial), region, 2);

    const auto newton = metric_delaunay(p, d, region, eps);
    const auto pulled = metric_delaunay_pullback(p, d, region);
    CHECK(newton.certified);
    CHECK(newton.result.top_simplices() == oracle);
    CHECK(pulled.result.top_simplices() == oracle);
    for (const auto& b : newton.result.balls) {
      CHECK(b.protection > -newton.result.tolerance);
      for (auto v : b.simplex) CHECK(d.distance(b.centre, p[v]) == doctest::Approx(b.radius).epsilon(1e-8));
    }
  }
}
