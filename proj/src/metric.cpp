#include "delstab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>

#include "delstab/rng.hpp"
#include "subsets.hpp"

namespace delstab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Distances {
  double lo = kInf;
  double hi = 0.0;
  double mean = 0.0;
};

Distances distances_to(const SimplexGeometry& s, const MetricModel& d, const Point& c) {
  Distances out;
  for (const auto& v : s.vertices) {
    const double x = d.distance(c, v);
    out.lo = std::min(out.lo, x);
    out.hi = std::max(out.hi, x);
    out.mean += x;
  }
  out.mean /= static_cast<double>(s.vertices.size());
  return out;
}

Eigen::VectorXd residual(const SimplexGeometry& s, const MetricModel& d, const Point& c) {
  const int m = s.dim();
  Eigen::VectorXd f(m);
  const double d0 = d.distance(c, s.vertices[0]);
  for (int i = 1; i <= m; ++i) f(i - 1) = d.distance(c, s.vertices[i]) - d0;
  return f;
}

// Damped Newton with a central-difference Jacobian.
std::optional<Point> newton(const SimplexGeometry& s, const MetricModel& d, Point c, double scale,
                            int max_iterations) {
  const int m = s.dim();
  const double tol = 1e-9 * scale;
  const double h = 1e-7 * scale;
  Eigen::VectorXd f = residual(s, d, c);
  for (int it = 0; it < max_iterations; ++it) {
    const auto dist = distances_to(s, d, c);
    if (dist.hi - dist.lo < tol) return c;

    Matrix j(m, m);
    for (int k = 0; k < m; ++k) {
      Point a = c, b = c;
      a(k) += h;
      b(k) -= h;
      j.col(k) = (residual(s, d, a) - residual(s, d, b)) / (2.0 * h);
    }
    Eigen::PartialPivLU<Matrix> lu(j);
    if (!(std::abs(lu.determinant()) > 0.0)) return std::nullopt;
    const Eigen::VectorXd step = lu.solve(-f);
    if (!step.allFinite()) return std::nullopt;

    double t = 1.0;
    const double fn = f.norm();
    bool moved = false;
    while (t > 1e-6) {
      Point next = c + t * step;
      Eigen::VectorXd fnext = residual(s, d, next);
      if (fnext.norm() < fn) {
        c = std::move(next);
        f = std::move(fnext);
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) {
      const auto final_dist = distances_to(s, d, c);
      return final_dist.hi - final_dist.lo < tol ? std::optional<Point>(c) : std::nullopt;
    }
  }
  const auto dist = distances_to(s, d, c);
  if (dist.hi - dist.lo < tol) return c;
  return std::nullopt;
}

DelaunayResult assemble(std::vector<DelaunayBall> balls, std::vector<Simplex> groups, double tau) {
  std::sort(balls.begin(), balls.end(),
            [](const DelaunayBall& a, const DelaunayBall& b) { return a.simplex < b.simplex; });
  std::sort(groups.begin(), groups.end());
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
  DelaunayResult out;
  out.tolerance = tau;
  std::vector<Simplex> gens;
  for (const auto& b : balls) gens.push_back(b.simplex);
  gens.insert(gens.end(), groups.begin(), groups.end());
  out.complex = SimplicialComplex::closure(gens);
  out.balls = std::move(balls);
  out.generic = groups.empty();
  out.cospherical_groups = std::move(groups);
  return out;
}

}  // namespace

bool Box::contains(const Point& x) const {
  return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

double Box::distance_to_boundary(const Point& x) const {
  return std::min((x - lo).minCoeff(), (hi - x).minCoeff());
}

Box Box::around(const PointSet& points, double margin) {
  Box b;
  b.lo = points[0];
  b.hi = points[0];
  for (const auto& p : points) {
    b.lo = b.lo.cwiseMin(p);
    b.hi = b.hi.cwiseMax(p);
  }
  b.lo.array() -= margin;
  b.hi.array() += margin;
  return b;
}

DisplacementField::DisplacementField(int dim, double amplitude, std::vector<Wave> waves, Point offset)
    : dim_(dim), amplitude_(amplitude), waves_(std::move(waves)), offset_(std::move(offset)) {
  if (dim < 1) throw PreconditionError("displacement field needs a positive dimension");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw PreconditionError("amplitude must be finite and >= 0");
  if (offset_.size() == 0) offset_ = Point::Zero(dim);
  if (offset_.size() != dim) throw PreconditionError("offset dimension mismatch");
  if (amplitude > 0.0 && waves_.empty()) throw PreconditionError("non-zero amplitude needs at least one wave");
  double kmax = 0.0;
  for (auto& w : waves_) {
    if (w.wave_vector.size() != dim || w.direction.size() != dim)
      throw PreconditionError("wave dimension mismatch");
    if (w.direction.norm() == 0.0) throw PreconditionError("wave direction must be non-zero");
    w.direction.normalize();
    kmax = std::max(kmax, w.wave_vector.norm());
  }
  lipschitz_ = amplitude * kmax;
  if (!(lipschitz_ < 0.5)) throw PreconditionError("displacement Lipschitz constant must be below 1/2");
}

DisplacementField DisplacementField::identity(int dim) { return DisplacementField(dim, 0.0, {}); }

DisplacementField DisplacementField::translation(const Point& t) {
  return DisplacementField(static_cast<int>(t.size()), 0.0, {}, t);
}

DisplacementField DisplacementField::sinusoidal(int dim, double amplitude, double wavelength,
                                                std::uint64_t seed, int waves) {
  if (!(wavelength > 0.0)) throw PreconditionError("wavelength must be positive");
  if (waves < 1) throw PreconditionError("need at least one wave");
  Rng rng(seed);
  std::vector<Wave> ws;
  for (int i = 0; i < waves; ++i) {
    Wave w;
    w.wave_vector = rng.unit_vector(dim) * (2.0 * std::numbers::pi / wavelength);
    w.direction = rng.unit_vector(dim);
    w.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    ws.push_back(std::move(w));
  }
  return DisplacementField(dim, amplitude, std::move(ws));
}

Point DisplacementField::displacement(const Point& x) const {
  Point out = offset_;
  if (waves_.empty()) return out;
  const double scale = amplitude_ / static_cast<double>(waves_.size());
  for (const auto& w : waves_) out += scale * std::sin(w.wave_vector.dot(x) + w.phase) * w.direction;
  return out;
}

Point DisplacementField::inverse(const Point& y) const {
  Point x = y - offset_;
  if (waves_.empty() || amplitude_ == 0.0) return x;
  const double tol = 1e-15 * (1.0 + y.norm());
  for (int it = 0; it < 200; ++it) {
    Point next = y - displacement(x);
    const double change = (next - x).norm();
    x = std::move(next);
    if (change <= tol) break;
  }
  return x;
}

Matrix DisplacementField::jacobian(const Point& x) const {
  Matrix j = Matrix::Identity(dim_, dim_);
  if (waves_.empty()) return j;
  const double scale = amplitude_ / static_cast<double>(waves_.size());
  for (const auto& w : waves_)
    j += scale * std::cos(w.wave_vector.dot(x) + w.phase) * w.direction * w.wave_vector.transpose();
  return j;
}

double DisplacementField::sup_displacement() const { return amplitude_ + offset_.norm(); }

MetricModel MetricModel::euclidean(int dim) {
  MetricModel d;
  d.kind_ = MetricKind::euclidean;
  d.dim_ = dim;
  d.field_ = DisplacementField::identity(dim);
  return d;
}

MetricModel MetricModel::pullback(DisplacementField field, Box domain) {
  MetricModel d;
  d.kind_ = MetricKind::pullback;
  d.dim_ = field.dim();
  // A constant offset cancels in phi(x) - phi(y); only the oscillating part moves distances.
  d.rho_bound_ = 2.0 * field.amplitude();
  d.domain_ = std::move(domain);
  d.field_ = std::move(field);
  return d;
}

MetricModel MetricModel::additive_noise(int dim, double amplitude, std::uint64_t seed, Box domain) {
  if (!(amplitude >= 0.0)) throw PreconditionError("amplitude must be >= 0");
  MetricModel d;
  d.kind_ = MetricKind::additive_noise;
  d.dim_ = dim;
  d.rho_bound_ = amplitude;
  d.noise_amplitude_ = amplitude;
  Rng rng(seed);
  const double extent = std::max(1e-300, (domain.hi - domain.lo).norm());
  d.noise_wave_ = rng.unit_vector(dim) * (2.0 * std::numbers::pi / extent);
  d.noise_phase_ = rng.uniform(0.0, 2.0 * std::numbers::pi);
  d.domain_ = std::move(domain);
  d.field_ = DisplacementField::identity(dim);
  return d;
}

double MetricModel::distance(const Point& x, const Point& y) const {
  switch (kind_) {
    case MetricKind::euclidean:
      return (x - y).norm();
    case MetricKind::pullback:
      return (field_.apply(x) - field_.apply(y)).norm();
    case MetricKind::additive_noise: {
      const double r = (x - y).norm();
      if (noise_amplitude_ == 0.0) return r;
      // The damping factor keeps d(x,x) = 0 and d >= 0 (r - a(1 - e^{-r^2/a^2}) >= 0).
      const double a = noise_amplitude_;
      const double damp = 1.0 - std::exp(-(r * r) / (a * a));
      return r + a * std::sin(noise_wave_.dot(x + y) + noise_phase_) * damp;
    }
  }
  return (x - y).norm();
}

Point MetricModel::map(const Point& x) const {
  return kind_ == MetricKind::pullback ? field_.apply(x) : x;
}

MetricCircumcentre metric_circumcentre(const SimplexGeometry& s, const MetricModel& d,
                                       const MetricCircumcentreOptions& options) {
  const int m = s.dim();
  if (m < 1 || s.ambient_dim() != m) throw PreconditionError("metric circumcentre needs an m-simplex in R^m");
  const auto metrics = simplex_metrics(s);
  if (metrics.degenerate || !metrics.circumball)
    throw PreconditionError("metric circumcentre of a degenerate simplex");

  const Point& c0 = metrics.circumball->centre;
  const double radius = metrics.circumball->radius;
  const double eps = options.eps > 0.0 ? std::max(options.eps, radius) : radius;
  const double mu0 = metrics.shortest_edge / eps;
  const double rho = d.rho_bound();

  MetricCircumcentre out;
  out.within_hypothesis = rho <= metrics.thickness * metrics.shortest_edge / 8.0;
  out.search_radius = 8.0 * rho / (metrics.thickness * mu0) + 1e-7 * radius;

  auto accept = [&](const std::optional<Point>& c) {
    if (!c || (*c - c0).norm() > out.search_radius) return false;
    const auto dist = distances_to(s, d, *c);
    out.found = true;
    out.centre = *c;
    out.radius = dist.mean;
    out.spread = dist.hi - dist.lo;
    return true;
  };

  out.starts = 1;
  if (accept(newton(s, d, c0, radius, options.max_iterations))) return out;

  // 3^m grid of starts inside the search ball, centre excluded.
  const double step = 0.5 * out.search_radius;
  std::vector<int> digit(m, 0);
  int total = 1;
  for (int k = 0; k < m; ++k) total *= 3;
  for (int idx = 0; idx < total; ++idx) {
    int rest = idx;
    bool centre = true;
    Point start = c0;
    for (int k = 0; k < m; ++k) {
      const int dk = rest % 3 - 1;
      rest /= 3;
      centre = centre && dk == 0;
      start(k) += step * dk;
    }
    if (centre) continue;
    ++out.starts;
    if (accept(newton(s, d, start, radius, options.max_iterations))) return out;
  }
  return out;
}

MetricDelaunayResult metric_delaunay(const PointSet& points, const MetricModel& d,
                                     std::span<const VertexId> region, double eps, Exec exec) {
  require_full_dimensional(points);
  if (region.empty()) throw PreconditionError("region must not be empty");
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  const std::size_t m = static_cast<std::size_t>(points.dim());
  const double tau = delaunay_tolerance(points);
  const double cap = 2.0 * eps + 4.0 * d.rho_bound();

  std::set<Simplex> candidate_set;
  for (VertexId q : region) {
    if (q >= points.size()) throw PreconditionError("region vertex out of range");
    std::vector<VertexId> near;
    for (VertexId v = 0; v < points.size(); ++v)
      if (v != q && (points[v] - points[q]).norm() <= cap) near.push_back(v);
    std::vector<VertexId> buf;
    detail::for_each_subset(near.size(), m, 0, buf, [&](const std::vector<VertexId>& idx) {
      std::vector<VertexId> ids{q};
      for (auto i : idx) ids.push_back(near[i]);
      for (std::size_t a = 1; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b)
          if ((points[ids[a]] - points[ids[b]]).norm() > cap) return;
      candidate_set.insert(Simplex(std::move(ids)));
    });
  }
  const std::vector<Simplex> candidates(candidate_set.begin(), candidate_set.end());

  struct Outcome {
    enum { skipped, rejected, accepted, missing } state = skipped;
    DelaunayBall ball;
    std::vector<VertexId> extras;
  };
  std::vector<Outcome> outcomes(candidates.size());
  MetricCircumcentreOptions opts;
  opts.eps = eps;

  auto evaluate = [&](std::size_t i) {
    const Simplex& s = candidates[i];
    const auto g = geometry_of(points, s);
    const auto metrics = simplex_metrics(g);
    if (metrics.degenerate || !metrics.circumball) return;
    const auto mc = metric_circumcentre(g, d, opts);
    Outcome& o = outcomes[i];
    if (!mc.found) {
      o.state = Outcome::missing;
      return;
    }
    double prot = kInf;
    for (VertexId q = 0; q < points.size(); ++q) {
      if (s.contains(q)) continue;
      const double margin = d.distance(mc.centre, points[q]) - mc.radius;
      if (margin < -tau) {
        o.state = Outcome::rejected;
        return;
      }
      if (margin <= tau) o.extras.push_back(q);
      prot = std::min(prot, margin);
    }
    o.state = Outcome::accepted;
    o.ball = {s, mc.centre, mc.radius, prot};
  };

  const long nc = static_cast<long>(candidates.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < nc; ++i) evaluate(static_cast<std::size_t>(i));
  } else {
    for (long i = 0; i < nc; ++i) evaluate(static_cast<std::size_t>(i));
  }

  MetricDelaunayResult out;
  out.candidates = candidates.size();
  std::vector<DelaunayBall> balls;
  std::vector<Simplex> groups;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto& o = outcomes[i];
    if (o.state == Outcome::missing) out.not_found.push_back(candidates[i]);
    if (o.state != Outcome::accepted) continue;
    if (!o.extras.empty()) {
      std::vector<VertexId> g = o.ball.simplex.ids();
      g.insert(g.end(), o.extras.begin(), o.extras.end());
      std::sort(g.begin(), g.end());
      groups.emplace_back(std::move(g));
    }
    balls.push_back(std::move(o.ball));
  }
  out.certified = out.not_found.empty();
  out.result = assemble(std::move(balls), std::move(groups), tau);
  return out;
}

MetricDelaunayResult metric_delaunay_pullback(const PointSet& points, const MetricModel& d,
                                              std::span<const VertexId> region) {
  if (d.kind() == MetricKind::additive_noise)
    throw PreconditionError("the pullback path needs a pullback or Euclidean metric");
  if (region.empty()) throw PreconditionError("region must not be empty");
  std::vector<Point> mapped;
  mapped.reserve(points.size());
  for (const auto& p : points) mapped.push_back(d.map(p));
  const PointSet image(std::move(mapped));
  const auto del = delaunay_lifted(image);
  const auto st = star(del.complex, region);
  const int m = points.dim();

  std::vector<DelaunayBall> balls;
  for (const auto& s : st.of_dim(m)) {
    const DelaunayBall* b = del.ball(s);
    if (!b) continue;
    const Point c = d.kind() == MetricKind::pullback ? d.field().inverse(b->centre) : b->centre;
    balls.push_back({s, c, b->radius, b->protection});
  }
  std::vector<Simplex> groups;
  for (const auto& g : del.cospherical_groups)
    if (st.contains(g)) groups.push_back(g);

  MetricDelaunayResult out;
  out.result = assemble(std::move(balls), std::move(groups), delaunay_tolerance(points));
  return out;
}

}  // namespace delstab
