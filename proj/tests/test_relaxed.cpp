#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "delstab/generators.hpp"
#include "delstab/genericity.hpp"
#include "delstab/relaxed.hpp"
#include "support.hpp"

using namespace delstab;
using testing::pt;

namespace {

double gap_oracle(const PointSet& p, const Simplex& s, const Point& c) {
  double far = 0.0, near = std::numeric_limits<double>::infinity();
  for (auto v : s) far = std::max(far, (p[v] - c).norm());
  for (const auto& q : p) near = std::min(near, (q - c).norm());
  return far - near;
}

struct Fixture {
  PointSet points;
  double eps;
  std::vector<VertexId> region;
  SimplicialComplex star;
};

Fixture generic_fixture(std::uint64_t seed) {
  auto p = jittered_grid(10, 2, 1.0, 0.2, seed);
  const auto s = sampling_parameters(p);
  const auto deep = deep_interior(p, s.epsilon);
  std::vector<VertexId> region{deep[deep.size() / 2]};
  const auto a = classify_generic(p, region, s);
  REQUIRE(a.protection.generic);
  return {p, s.epsilon, region, a.safe.safe_simplices};
}

bool subset(const SimplicialComplex& a, const SimplicialComplex& b) {
  return std::all_of(a.begin(), a.end(), [&](const Simplex& s) { return b.contains(s); });
}

}  // namespace

TEST_CASE("relaxation gap follows its definition") {
  const auto p = testing::random_points(25, 2, 4);
  const Simplex s{0, 3, 7};
  for (const auto& c : testing::random_points(40, 2, 5)) CHECK(relaxation_gap(p, s, c) == gap_oracle(p, s, c));
}

TEST_CASE("zero relaxation recovers the delaunay star") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto f = generic_fixture(seed);
    const auto r = relaxed_delaunay(f.points, 0.0, f.region, f.eps);
    CHECK(r.certified);
    CHECK(r.exhaustive);
    CHECK(r.undecided.empty());
    CHECK(r.complex == f.star);
  }
}

TEST_CASE("relaxed complexes grow with rho and contain the delaunay star") {
  const auto f = generic_fixture(2);
  SimplicialComplex previous = f.star;
  for (double rho : {0.0, 0.01, 0.05, 0.2, 0.5}) {
    const auto r = relaxed_delaunay(f.points, rho, f.region, f.eps);
    CHECK(r.certified);
    CHECK(subset(f.star, r.complex));
    CHECK(subset(previous, r.complex));
    for (const auto& w : r.witnesses) CHECK(gap_oracle(f.points, w.simplex, w.centre) <= rho + 1e-9);
    previous = r.complex;
  }
}

TEST_CASE("large relaxation is a strict superset with explicit witnesses") {
  const auto f = generic_fixture(1);
  const double rho = 10 * f.eps;
  const auto r = relaxed_delaunay(f.points, rho, f.region, f.eps);
  CHECK_FALSE(r.exhaustive);
  CHECK(subset(f.star, r.complex));
  CHECK(r.complex.size() > f.star.size());
  for (const auto& w : r.witnesses) CHECK(gap_oracle(f.points, w.simplex, w.centre) <= rho + 1e-9);
}

TEST_CASE("rejections survive a dense scan of the search ball") {
  const auto f = generic_fixture(3);
  const double rho = 0.05;
  const auto r = relaxed_delaunay(f.points, rho, f.region, f.eps);
  REQUIRE(r.certified);
  REQUIRE_FALSE(r.rejected.empty());
  const Point q = f.points[f.region[0]];
  const double radius = f.eps + rho;
  const int n = 150;
  for (const auto& s : r.rejected) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const Point c = q + pt({radius * (2.0 * i / n - 1), radius * (2.0 * j / n - 1)});
        if ((c - q).norm() <= radius) best = std::min(best, gap_oracle(f.points, s, c));
      }
    CHECK(best > rho);
  }
}

TEST_CASE("shallow region vertices are not exhaustive") {
  const auto f = generic_fixture(1);
  const std::vector<VertexId> corner{0};
  const auto r = relaxed_delaunay(f.points, 0.0, corner, f.eps);
  CHECK_FALSE(r.exhaustive);
}

TEST_CASE("serial and parallel relaxed searches agree") {
  const auto f = generic_fixture(4);
  RelaxedOptions serial;
  serial.exec = Exec::serial;
  const auto a = relaxed_delaunay(f.points, 0.02, f.region, f.eps, serial);
  const auto b = relaxed_delaunay(f.points, 0.02, f.region, f.eps);
  CHECK(a.complex == b.complex);
  CHECK(a.rejected == b.rejected);
}
