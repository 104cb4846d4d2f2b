#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "delstab/delaunay.hpp"
#include "delstab/predicates.hpp"
#include "support.hpp"

using namespace delstab;
using testing::pt;

namespace {

double hull_area(const PointSet& p) {
  std::vector<std::pair<double, double>> v;
  for (const auto& x : p) v.emplace_back(x(0), x(1));
  std::sort(v.begin(), v.end());
  auto cross = [](auto o, auto a, auto b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<double, double>> h(2 * v.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], v[i]) <= 0) --k;
    h[k++] = v[i];
  }
  for (std::size_t i = v.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], v[i - 1]) <= 0) --k;
    h[k++] = v[i - 1];
  }
  double a = 0;
  for (std::size_t i = 0; i + 1 < k; ++i) a += h[i].first * h[i + 1].second - h[i + 1].first * h[i].second;
  return 0.5 * std::abs(a);
}

double simplex_volume(const PointSet& p, const Simplex& s) {
  const int m = p.dim();
  Matrix e(m, m);
  for (int i = 0; i < m; ++i) e.col(i) = p[s[i + 1]] - p[s[0]];
  double f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return std::abs(e.determinant()) / f;
}

// No point strictly inside any circumsphere, decided exactly.
bool empty_spheres(const PointSet& p, const DelaunayResult& d) {
  for (const auto& b : d.balls) {
    std::vector<Point> s;
    for (auto v : b.simplex) s.push_back(p[v]);
    for (VertexId q = 0; q < p.size(); ++q)
      if (!b.simplex.contains(q) && insphere(s, p[q]) > 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("four points in convex position") {
  PointSet p({pt({0, 0}), pt({1, 0}), pt({0, 1}), pt({2, 2})});
  auto d = delaunay_lifted(p);
  REQUIRE(d.balls.size() == 2);
  CHECK(d.generic);
  auto* a = d.ball(Simplex{0, 1, 2});
  auto* b = d.ball(Simplex{1, 2, 3});
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->protection == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(b->protection == doctest::Approx(std::sqrt(2.0) / 3).epsilon(1e-12));
  CHECK(b->radius == doctest::Approx(5 * std::sqrt(2.0) / 6).epsilon(1e-12));
  CHECK(d.complex.contains(Simplex{1, 2}));
  CHECK_FALSE(d.complex.contains(Simplex{0, 3}));
}

TEST_CASE("collinear input is rejected") {
  PointSet p({pt({0, 0}), pt({1, 1}), pt({2, 2}), pt({3, 3})});
  CHECK_THROWS_AS(delaunay_lifted(p), PreconditionError);
  CHECK_THROWS_AS(delaunay_bruteforce(p), PreconditionError);
  CHECK_THROWS_AS(delaunay_lifted(PointSet({pt({0, 0}), pt({1, 0})})), PreconditionError);
}

TEST_CASE("random planar sets: paths agree and tile the hull") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto p = testing::random_points(40, 2, seed);
    auto lifted = delaunay_lifted(p);
    auto serial = delaunay_bruteforce(p, Exec::serial);
    auto parallel = delaunay_bruteforce(p, Exec::parallel);
    CHECK(lifted.complex == serial.complex);
    CHECK(parallel.complex == serial.complex);
    CHECK(lifted.generic);
    CHECK(empty_spheres(p, lifted));
    double area = 0;
    for (const auto& s : lifted.top_simplices()) area += simplex_volume(p, s);
    CHECK(area == doctest::Approx(hull_area(p)).epsilon(1e-10));
    CHECK(lifted.min_protection() > lifted.tolerance);
  }
}

TEST_CASE("random spatial sets: paths agree") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto p = testing::random_points(30, 3, seed);
    auto lifted = delaunay_lifted(p);
    auto serial = delaunay_bruteforce(p, Exec::serial);
    CHECK(lifted.complex == serial.complex);
    CHECK(empty_spheres(p, lifted));
    CHECK(is_embedded(lifted.complex, p).embedded);
  }
}

TEST_CASE("grid input is degenerate and both paths keep the cospherical groups") {
  auto p = testing::grid_points(3, 2);
  auto lifted = delaunay_lifted(p);
  auto brute = delaunay_bruteforce(p, Exec::serial);
  CHECK_FALSE(lifted.generic);
  CHECK(lifted.cospherical_groups.size() == 4);
  CHECK(lifted.complex == brute.complex);
  CHECK(lifted.balls.size() == 16);  // both diagonals of each unit square
  CHECK(std::abs(lifted.min_protection()) <= lifted.tolerance);

  auto cube = testing::grid_points(3, 3);
  auto lc = delaunay_lifted(cube);
  auto bc = delaunay_bruteforce(cube, Exec::parallel);
  CHECK(lc.complex == bc.complex);
  CHECK(lc.cospherical_groups.size() == 8);
}

TEST_CASE("protection margins against the definition") {
  auto p = testing::random_points(25, 2, 99);
  auto d = delaunay_lifted(p);
  for (const auto& b : d.balls) {
    double mn = 1e300;
    for (VertexId q = 0; q < p.size(); ++q)
      if (!b.simplex.contains(q)) mn = std::min(mn, (p[q] - b.centre).norm() - b.radius);
    CHECK(b.protection == doctest::Approx(mn).epsilon(1e-12));
    CHECK(protection_margin(p, b.simplex, {b.centre, b.radius}) == doctest::Approx(mn));
  }
}
