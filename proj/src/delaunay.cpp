#include "delstab/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include "subsets.hpp"

namespace delstab {

namespace {

struct Accepted {
  Simplex simplex;
  Point centre;
  double radius = 0.0;
  double protection = std::numeric_limits<double>::infinity();
  std::vector<VertexId> extras;  // points within tau of the sphere
};

// Per-thread scratch for the candidate test; reused so the inner loop does not allocate.
class CandidateTester {
 public:
  CandidateTester(const PointSet& points, double tau)
      : points_(points), tau_(tau), m_(points.dim()), a_(m_, m_), b_(m_), z_(m_), lu_(m_) {}

  // Accepts the (m+1)-subset when it is non-degenerate and no point lies
  // deeper than tau inside its circumball.
  std::optional<Accepted> operator()(std::span<const VertexId> ids) {
    const Point& p0 = points_[ids[0]];
    double col_norms = 1.0;
    for (int i = 0; i < m_; ++i) {
      auto row = a_.row(i);
      row = (points_[ids[i + 1]] - p0).transpose();
      double sq = row.squaredNorm();
      b_(i) = 0.5 * sq;
      col_norms *= std::sqrt(sq);
    }
    lu_.compute(a_);
    if (!(std::abs(lu_.determinant()) > kRankTolerance * col_norms)) return std::nullopt;
    z_.noalias() = lu_.solve(b_);
    const double r = z_.norm();

    Accepted acc;
    acc.centre = p0 + z_;
    acc.radius = r;
    for (VertexId q = 0; q < points_.size(); ++q) {
      if (std::find(ids.begin(), ids.end(), q) != ids.end()) continue;
      double d = (points_[q] - acc.centre).norm() - r;
      if (d < -tau_) return std::nullopt;
      if (d <= tau_) acc.extras.push_back(q);
      acc.protection = std::min(acc.protection, d);
    }
    acc.simplex = Simplex(std::vector<VertexId>(ids.begin(), ids.end()));
    return acc;
  }

 private:
  const PointSet& points_;
  double tau_;
  int m_;
  Matrix a_;
  Eigen::VectorXd b_, z_;
  Eigen::PartialPivLU<Matrix> lu_;
};

// Calls f on every k-subset of {first, ..., n-1} in lexicographic order.

DelaunayResult assemble(std::vector<Accepted> accepted, double tau) {
  std::sort(accepted.begin(), accepted.end(),
            [](const Accepted& a, const Accepted& b) { return a.simplex < b.simplex; });
  accepted.erase(std::unique(accepted.begin(), accepted.end(),
                             [](const Accepted& a, const Accepted& b) { return a.simplex == b.simplex; }),
                 accepted.end());

  DelaunayResult out;
  out.tolerance = tau;
  std::set<Simplex> groups;
  std::vector<Simplex> generators;
  for (auto& a : accepted) {
    if (!a.extras.empty()) {
      std::vector<VertexId> g = a.simplex.ids();
      g.insert(g.end(), a.extras.begin(), a.extras.end());
      std::sort(g.begin(), g.end());
      groups.insert(Simplex(std::move(g)));
    }
    generators.push_back(a.simplex);
    out.balls.push_back({a.simplex, std::move(a.centre), a.radius, a.protection});
  }
  out.cospherical_groups.assign(groups.begin(), groups.end());
  out.generic = groups.empty();
  generators.insert(generators.end(), groups.begin(), groups.end());
  out.complex = SimplicialComplex::closure(generators);
  return out;
}

void scan_first(const PointSet& points, std::size_t first, CandidateTester& test,
                std::vector<Accepted>& out) {
  const std::size_t n = points.size();
  const std::size_t m = static_cast<std::size_t>(points.dim());
  std::vector<VertexId> buf{first};
  detail::for_each_subset(n, m, first + 1, buf, [&](const std::vector<VertexId>& ids) {
    if (auto a = test(ids)) out.push_back(std::move(*a));
  });
}

// Builds one Delaunay m-simplex by inflating an empty ball: the centre moves
// orthogonally to the current simplex until the sphere touches a new point.
std::vector<VertexId> grow_first_simplex(const PointSet& points) {
  const int m = points.dim();
  const double tiny = 1e-12 * points.diameter();
  VertexId a = 0;
  for (VertexId i = 1; i < points.size(); ++i)
    if (points[i](0) < points[a](0)) a = i;

  std::vector<VertexId> ids{a};
  Point c = points[a];
  double r = 0.0;
  for (int k = 1; k <= m; ++k) {
    const Point& p0 = points[ids[0]];
    Matrix basis(m, 0);
    if (ids.size() > 1) {
      std::vector<Point> pts;
      for (auto v : ids) pts.push_back(points[v]);
      basis = FlatSubspace::affine_hull(pts).basis;
    }
    Point u;
    double best_norm = -1.0;
    for (int j = 0; j < m; ++j) {
      Point e = Point::Unit(m, j);
      Point res = e - basis * (basis.transpose() * e);
      if (res.norm() > best_norm) {
        best_norm = res.norm();
        u = res;
      }
    }
    u.normalize();

    std::optional<VertexId> hit;
    double t_hit = 0.0;
    for (int side = 0; side < 2 && !hit; ++side) {
      if (side == 1) u = -u;
      for (VertexId q = 0; q < points.size(); ++q) {
        double s = u.dot(points[q] - p0);
        if (s <= tiny) continue;
        double t = ((c - points[q]).squaredNorm() - r * r) / (2.0 * s);
        if (!hit || t < t_hit) {
          hit = q;
          t_hit = t;
        }
      }
    }
    if (!hit) throw PreconditionError("points do not span the ambient space");
    c += t_hit * u;
    r = (c - p0).norm();
    ids.push_back(*hit);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

struct PivotBall {
  Point centre;
  double radius;
};

// Rotates the pencil of spheres through `ridge` away from `apex` and returns
// the first sphere that touches another point, if any.
std::optional<PivotBall> pivot(const PointSet& points, const std::vector<VertexId>& ridge,
                               VertexId apex) {
  SimplexGeometry g;
  for (auto v : ridge) g.vertices.push_back(points[v]);
  const Point& r0 = g.vertices[0];
  Point cr;
  double rr = 0.0;
  if (ridge.size() == 1) {
    cr = r0;
  } else {
    auto ball = circumcentre(g);
    if (!ball) return std::nullopt;
    cr = ball->centre;
    rr = ball->radius;
  }
  auto flat = FlatSubspace::affine_hull(g.vertices);
  Point n = flat.project(points[apex]) - points[apex];
  if (n.norm() == 0.0) return std::nullopt;
  n.normalize();

  const double tiny = 1e-12 * points.diameter();
  std::optional<double> best;
  for (VertexId q = 0; q < points.size(); ++q) {
    if (std::find(ridge.begin(), ridge.end(), q) != ridge.end()) continue;
    double s = n.dot(points[q] - r0);
    if (s <= tiny) continue;
    double t = ((cr - points[q]).squaredNorm() - rr * rr) / (2.0 * s);
    if (!best || t < *best) best = t;
  }
  if (!best) return std::nullopt;
  return PivotBall{cr + *best * n, std::sqrt(rr * rr + *best * *best)};
}

}  // namespace

const DelaunayBall* DelaunayResult::ball(const Simplex& s) const {
  auto it = std::lower_bound(balls.begin(), balls.end(), s,
                             [](const DelaunayBall& b, const Simplex& x) { return b.simplex < x; });
  if (it == balls.end() || it->simplex != s) return nullptr;
  return &*it;
}

double DelaunayResult::min_protection() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : balls) best = std::min(best, b.protection);
  return best;
}

std::vector<Simplex> DelaunayResult::top_simplices() const {
  std::vector<Simplex> out;
  out.reserve(balls.size());
  for (const auto& b : balls) out.push_back(b.simplex);
  return out;
}

double delaunay_tolerance(const PointSet& points) { return 1e-9 * points.diameter(); }

void require_full_dimensional(const PointSet& points) {
  if (points.size() < static_cast<std::size_t>(points.dim()) + 1)
    throw PreconditionError("need at least m+1 points");
  if (points.affine_rank() != points.dim())
    throw PreconditionError("points do not span the ambient space");
}

double protection_margin(const PointSet& points, const Simplex& s, const Circumball& ball) {
  double best = std::numeric_limits<double>::infinity();
  for (VertexId q = 0; q < points.size(); ++q) {
    if (s.contains(q)) continue;
    best = std::min(best, (points[q] - ball.centre).norm() - ball.radius);
  }
  return best;
}

DelaunayResult delaunay_bruteforce(const PointSet& points, Exec exec) {
  require_full_dimensional(points);
  const double tau = delaunay_tolerance(points);
  const std::size_t n = points.size();
  std::vector<Accepted> all;

  if (exec == Exec::serial) {
    CandidateTester test(points, tau);
    for (std::size_t i = 0; i < n; ++i) scan_first(points, i, test, all);
  } else {
#pragma omp parallel
    {
      CandidateTester test(points, tau);
      std::vector<Accepted> local;
#pragma omp for schedule(dynamic, 1) nowait
      for (std::size_t i = 0; i < n; ++i) scan_first(points, i, test, local);
#pragma omp critical
      all.insert(all.end(), std::make_move_iterator(local.begin()),
                 std::make_move_iterator(local.end()));
    }
  }
  return assemble(std::move(all), tau);
}

DelaunayResult delaunay_lifted(const PointSet& points) {
  require_full_dimensional(points);
  const double tau = delaunay_tolerance(points);
  const std::size_t m = static_cast<std::size_t>(points.dim());
  CandidateTester test(points, tau);

  std::map<Simplex, Accepted> found;
  std::set<Simplex> rejected;
  std::deque<Simplex> queue;
  auto admit = [&](std::vector<VertexId> ids) {
    std::sort(ids.begin(), ids.end());
    Simplex s(ids);
    if (found.count(s) || rejected.count(s)) return;
    auto a = test(ids);
    if (!a) {
      rejected.insert(s);
      return;
    }
    found.emplace(s, std::move(*a));
    queue.push_back(s);
  };

  admit(grow_first_simplex(points));
  // The inflated seed can only be rejected through rounding; enumerate instead.
  if (found.empty()) return delaunay_bruteforce(points, Exec::serial);

  while (!queue.empty()) {
    Simplex s = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k <= m; ++k) {
      std::vector<VertexId> ridge;
      for (std::size_t i = 0; i <= m; ++i)
        if (i != k) ridge.push_back(s[i]);
      auto ball = pivot(points, ridge, s[k]);
      if (!ball) continue;

      std::vector<VertexId> group = ridge;
      for (VertexId q = 0; q < points.size(); ++q) {
        if (std::find(ridge.begin(), ridge.end(), q) != ridge.end()) continue;
        if (std::abs((points[q] - ball->centre).norm() - ball->radius) <= tau) group.push_back(q);
      }
      if (group.size() == m + 1) {
        admit(group);
      } else if (group.size() > m + 1) {
        std::sort(group.begin(), group.end());
        std::vector<VertexId> pick;
        detail::for_each_subset(group.size(), m + 1, 0, pick, [&](const std::vector<VertexId>& idx) {
          std::vector<VertexId> ids;
          for (auto i : idx) ids.push_back(group[i]);
          admit(std::move(ids));
        });
      }
    }
  }

  std::vector<Accepted> all;
  for (auto& [s, a] : found) all.push_back(std::move(a));
  return assemble(std::move(all), tau);
}

}  // namespace delstab
