#include "delstab/generators.hpp"

#include "delstab/genericity.hpp"
#include "delstab/rng.hpp"

namespace delstab {

PointSet jittered_grid(int side, int m, double spacing, double jitter, std::uint64_t seed) {
  if (side < 2 || m < 1) throw PreconditionError("grid needs side >= 2 and m >= 1");
  if (!(jitter >= 0.0 && jitter < 0.5)) throw PreconditionError("jitter must lie in [0, 0.5)");
  Rng rng(seed);
  std::size_t total = 1;
  for (int k = 0; k < m; ++k) total *= static_cast<std::size_t>(side);
  std::vector<Point> pts;
  pts.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Point p(m);
    std::size_t rest = idx;
    for (int k = 0; k < m; ++k) {
      p(k) = spacing * static_cast<double>(rest % side);
      rest /= side;
    }
    if (jitter > 0.0)
      for (int k = 0; k < m; ++k) p(k) += spacing * rng.uniform(-jitter, jitter);
    pts.push_back(p);
  }
  return PointSet(std::move(pts));
}

PointSet uniform_box(std::size_t n, int m, std::uint64_t seed) {
  if (m < 1) throw PreconditionError("dimension must be positive");
  Rng rng(seed);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    Point p(m);
    for (int k = 0; k < m; ++k) p(k) = rng.uniform();
    pts.push_back(p);
  }
  return PointSet(std::move(pts));
}

double interior_protection(const PointSet& points) {
  const auto hull = ConvexHull::of(points);
  const auto del = delaunay_lifted(points);
  const auto sampling = sampling_parameters(points, hull, del);
  const auto deep = deep_interior(points, hull, sampling.epsilon);
  if (deep.empty()) return 0.0;
  const auto a = classify_generic(points, deep, sampling);
  return a.protection.generic ? a.protection.delta_raw : 0.0;
}

DeltaSearch delta_search(int side, int m, double spacing, double jitter, int k, std::uint64_t seed) {
  if (k < 1) throw PreconditionError("delta search needs k >= 1");
  DeltaSearch out;
  for (int i = 0; i < k; ++i) {
    auto p = jittered_grid(side, m, spacing, jitter, split_seed(seed, static_cast<std::uint64_t>(i)));
    const double d = interior_protection(p);
    out.candidate_deltas.push_back(d);
    if (i == 0 || d > out.delta) {
      out.delta = d;
      out.best = static_cast<std::size_t>(i);
      out.points = std::move(p);
    }
  }
  return out;
}

}  // namespace delstab
