#include <doctest.h>

#include <cmath>
#include <random>

#include "delstab/predicates.hpp"
#include "support.hpp"

using namespace delstab;
using testing::pt;

namespace {

int exact_orient2(const Point& a, const Point& b, const Point& c) {
  Rational ux = Rational(b(0)) - Rational(a(0)), uy = Rational(b(1)) - Rational(a(1));
  Rational vx = Rational(c(0)) - Rational(a(0)), vy = Rational(c(1)) - Rational(a(1));
  Rational d = ux * vy - uy * vx;
  return d > 0 ? 1 : (d < 0 ? -1 : 0);
}

}  // namespace

TEST_CASE("orientation sign convention") {
  CHECK(orientation(std::vector<Point>{pt({0, 0}), pt({1, 0}), pt({0, 1})}) == 1);
  CHECK(orientation(std::vector<Point>{pt({0, 0}), pt({0, 1}), pt({1, 0})}) == -1);
  CHECK(orientation(std::vector<Point>{pt({0, 0}), pt({1, 1}), pt({2, 2})}) == 0);
  CHECK(orientation(std::vector<Point>{pt({0, 0, 0}), pt({1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1})}) == 1);
}

TEST_CASE("orientation agrees with rational cross product on near-collinear input") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 2000; ++t) {
    Point a = pt({u(gen), u(gen)}), b = pt({u(gen), u(gen)});
    double s = u(gen) * 3 - 1;
    Point c = a + s * (b - a);  // collinear up to rounding
    if (t % 3 == 0) c(0) = std::nextafter(c(0), 2.0);
    std::vector<Point> tri{a, b, c};
    CHECK(orientation(tri) == exact_orient2(a, b, c));
  }
}

TEST_CASE("insphere in dimensions 1 to 3") {
  CHECK(insphere(std::vector<Point>{pt({0}), pt({2})}, pt({1})) == 1);
  CHECK(insphere(std::vector<Point>{pt({2}), pt({0})}, pt({1})) == 1);
  CHECK(insphere(std::vector<Point>{pt({0}), pt({2})}, pt({3})) == -1);
  CHECK(insphere(std::vector<Point>{pt({0}), pt({2})}, pt({2})) == 0);

  std::vector<Point> tri{pt({1, 0}), pt({0, 1}), pt({-1, 0})};
  std::vector<Point> tri_rev{pt({-1, 0}), pt({0, 1}), pt({1, 0})};
  for (const auto& t : {tri, tri_rev}) {
    CHECK(insphere(t, pt({0, 0})) == 1);
    CHECK(insphere(t, pt({2, 0})) == -1);
    CHECK(insphere(t, pt({0, -1})) == 0);
  }

  std::vector<Point> tet{pt({1, 0, 0}), pt({0, 1, 0}), pt({-1, 0, 0}), pt({0, 0, 1})};
  std::vector<Point> tet_rev{pt({0, 1, 0}), pt({1, 0, 0}), pt({-1, 0, 0}), pt({0, 0, 1})};
  for (const auto& t : {tet, tet_rev}) {
    CHECK(insphere(t, pt({0.1, 0.1, 0.1})) == 1);
    CHECK(insphere(t, pt({0, 0, -1.5})) == -1);
    CHECK(insphere(t, pt({0, -1, 0})) == 0);
  }
}

TEST_CASE("insphere agrees with distance to the circumcentre") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 500; ++t) {
    std::vector<Point> s{pt({u(gen), u(gen), u(gen)}), pt({u(gen), u(gen), u(gen)}),
                         pt({u(gen), u(gen), u(gen)}), pt({u(gen), u(gen), u(gen)})};
    Point q = pt({u(gen), u(gen), u(gen)});
    Eigen::Matrix3d a;
    Eigen::Vector3d b;
    for (int i = 0; i < 3; ++i) {
      a.row(i) = (s[i + 1] - s[0]).transpose();
      b(i) = 0.5 * (s[i + 1] - s[0]).squaredNorm();
    }
    if (std::abs(a.determinant()) < 1e-3) continue;
    Eigen::Vector3d c = s[0] + a.partialPivLu().solve(b);
    double gap = (c - s[0]).norm() - (q - c).norm();
    if (std::abs(gap) < 1e-9) continue;
    CHECK(insphere(s, q) == (gap > 0 ? 1 : -1));
  }
}

TEST_CASE("exact affine rank") {
  CHECK(affine_rank_exact(std::vector<Point>{pt({0, 0}), pt({1, 1}), pt({3, 3})}) == 1);
  CHECK(affine_rank_exact(std::vector<Point>{pt({0, 0}), pt({1, 1}), pt({3, 3.0000000000001})}) == 2);
}
