#include "delstab/relaxed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <set>

#include "delstab/delaunay.hpp"
#include "delstab/hull.hpp"
#include "subsets.hpp"

namespace delstab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class GapFunction {
 public:
  GapFunction(const PointSet& points, const Simplex& s, std::vector<VertexId> nearby)
      : points_(points), simplex_(s), nearby_(std::move(nearby)) {}

  double operator()(const Point& c) const {
    double far = 0.0;
    for (auto v : simplex_) far = std::max(far, (points_[v] - c).squaredNorm());
    double near = kInf;
    for (auto v : nearby_) near = std::min(near, (points_[v] - c).squaredNorm());
    return std::sqrt(far) - std::sqrt(near);
  }

 private:
  const PointSet& points_;
  const Simplex& simplex_;
  std::vector<VertexId> nearby_;
};

// Compass search from `start`; returns the best point found.
Point descend(const GapFunction& g, Point x, double step, double min_step, double target) {
  double gx = g(x);
  const int m = static_cast<int>(x.size());
  while (step > min_step && gx > target) {
    bool improved = false;
    for (int k = 0; k < m && !improved; ++k)
      for (double sign : {1.0, -1.0}) {
        Point y = x;
        y(k) += sign * step;
        const double gy = g(y);
        if (gy < gx) {
          x = std::move(y);
          gx = gy;
          improved = true;
          break;
        }
      }
    if (!improved) step *= 0.5;
  }
  return x;
}

struct Decision {
  enum { accepted, rejected, undecided } state = undecided;
  Point witness;
  double gap = kInf;
};

struct BoxNode {
  double lower;
  Point centre;
  double half_side;
  bool operator<(const BoxNode& o) const { return lower > o.lower; }  // min-heap
};

Decision decide(const PointSet& points, const Simplex& s, VertexId q, double rho, double radius,
                const std::vector<Point>& seeds, const RelaxedOptions& options) {
  const int m = points.dim();
  const double accept_slack = 1e-12 * points.diameter();
  const double target = rho + accept_slack;
  const double sqrt_m = std::sqrt(static_cast<double>(m));

  // Any nearest neighbour of a centre within r of q lies within 2r of q.
  const double reach = 2.0 * radius * (1.0 + sqrt_m);
  std::vector<VertexId> nearby;
  for (VertexId v = 0; v < points.size(); ++v)
    if ((points[v] - points[q]).norm() <= reach) nearby.push_back(v);
  const GapFunction local(points, s, nearby);

  Decision d;
  auto try_accept = [&](const Point& c) {
    const double gc = relaxation_gap(points, s, c);
    if (gc < d.gap) {
      d.gap = gc;
      d.witness = c;
    }
    if (gc <= target) {
      d.state = Decision::accepted;
      return true;
    }
    return false;
  };

  for (const auto& c : seeds)
    if (try_accept(c)) return d;
  for (const auto& c : seeds)
    if ((c - points[q]).norm() <= radius &&
        try_accept(descend(local, c, 0.25 * radius, 1e-12 * radius, target)))
      return d;

  std::priority_queue<BoxNode> heap;
  const Point& root = points[q];
  heap.push({local(root) - 2.0 * radius * sqrt_m, root, radius});
  std::size_t evaluations = 1;
  const double min_half_side = 1e-10 * radius;
  const int children = 1 << m;

  while (!heap.empty()) {
    BoxNode box = heap.top();
    heap.pop();
    if (box.lower > rho) {
      d.state = Decision::rejected;
      return d;
    }
    const double child_half = 0.5 * box.half_side;
    if (child_half < min_half_side || evaluations > options.max_evaluations) {
      // The lowest box cannot be resolved; try a descent from it before giving up.
      if (try_accept(descend(local, box.centre, child_half, 1e-14 * radius, target))) return d;
      d.state = Decision::undecided;
      return d;
    }
    for (int mask = 0; mask < children; ++mask) {
      Point c = box.centre;
      for (int k = 0; k < m; ++k) c(k) += (mask >> k & 1) ? child_half : -child_half;
      const double half_diag = child_half * sqrt_m;
      if ((c - root).norm() - half_diag > radius) continue;
      const double gc = local(c);
      ++evaluations;
      if (gc <= target && try_accept(c)) return d;
      heap.push({gc - 2.0 * half_diag, std::move(c), child_half});
    }
  }
  d.state = Decision::rejected;
  return d;
}

}  // namespace

double relaxation_gap(const PointSet& points, const Simplex& s, const Point& c) {
  double far = 0.0;
  for (auto v : s) far = std::max(far, (points[v] - c).norm());
  double near = kInf;
  for (const auto& p : points) near = std::min(near, (p - c).norm());
  return far - near;
}

RelaxedResult relaxed_delaunay(const PointSet& points, double rho, std::span<const VertexId> region,
                               double eps, const RelaxedOptions& options) {
  if (!(rho >= 0.0)) throw PreconditionError("rho must be >= 0");
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  if (region.empty()) throw PreconditionError("region must not be empty");
  require_full_dimensional(points);
  const int m = points.dim();
  for (auto q : region)
    if (q >= points.size()) throw PreconditionError("region vertex out of range");

  RelaxedResult out;
  const auto hull = ConvexHull::of(points);
  out.exhaustive = rho <= 2.0 * eps;
  for (auto q : region)
    out.exhaustive = out.exhaustive && hull.distance_to_boundary(points[q]) >= 4.0 * eps;

  const double radius = (eps + rho) * (1.0 + 1e-9);
  const double cap = 2.0 * radius;
  const auto del = delaunay_lifted(points);

  // Candidate simplices paired with the region vertex that anchors their search ball.
  std::vector<std::pair<Simplex, VertexId>> candidates;
  std::set<Simplex> seen;
  for (auto q : region) {
    std::vector<VertexId> near;
    for (VertexId v = 0; v < points.size(); ++v)
      if (v != q && (points[v] - points[q]).norm() <= cap) near.push_back(v);
    for (int k = 0; k <= m; ++k) {
      std::vector<VertexId> buf;
      detail::for_each_subset(near.size(), static_cast<std::size_t>(k), 0, buf,
                              [&](const std::vector<VertexId>& idx) {
                                std::vector<VertexId> ids{q};
                                for (auto i : idx) ids.push_back(near[i]);
                                for (std::size_t a = 1; a < ids.size(); ++a)
                                  for (std::size_t b = a + 1; b < ids.size(); ++b)
                                    if ((points[ids[a]] - points[ids[b]]).norm() > cap) return;
                                Simplex s(std::move(ids));
                                if (seen.insert(s).second) candidates.emplace_back(std::move(s), q);
                              });
    }
  }
  std::sort(candidates.begin(), candidates.end());
  out.candidates = candidates.size();

  std::vector<Decision> decisions(candidates.size());
  auto run = [&](std::size_t i) {
    const auto& [s, q] = candidates[i];
    std::vector<Point> seeds{points[q]};
    if (s.dim() >= 1)
      if (auto ball = circumcentre(geometry_of(points, s))) seeds.push_back(ball->centre);
    for (const auto& b : del.balls)
      if (s.is_face_of(b.simplex)) seeds.push_back(b.centre);
    decisions[i] = decide(points, s, q, rho, radius, seeds, options);
  };
  const long n = static_cast<long>(candidates.size());
  if (options.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  } else {
    for (long i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  }

  std::vector<Simplex> accepted;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& s = candidates[i].first;
    switch (decisions[i].state) {
      case Decision::accepted:
        accepted.push_back(s);
        out.witnesses.push_back({s, decisions[i].witness, decisions[i].gap});
        break;
      case Decision::rejected:
        out.rejected.push_back(s);
        break;
      case Decision::undecided:
        out.undecided.push_back(s);
        break;
    }
  }
  out.certified = out.undecided.empty();
  out.complex = SimplicialComplex::closure(accepted);
  return out;
}

}  // namespace delstab
