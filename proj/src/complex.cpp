#include "delstab/complex.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

#include "delstab/lp.hpp"
#include "delstab/predicates.hpp"

namespace delstab {

Simplex::Simplex(std::vector<VertexId> ids) : ids_(std::move(ids)) {
  if (ids_.empty()) throw PreconditionError("a simplex needs at least one vertex");
  std::sort(ids_.begin(), ids_.end());
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
    throw PreconditionError("simplex has repeated vertex ids");
}

bool Simplex::contains(VertexId v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }

bool Simplex::is_face_of(const Simplex& other) const {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

bool Simplex::shares_vertex(const Simplex& other) const {
  auto a = ids_.begin();
  auto b = other.ids_.begin();
  while (a != ids_.end() && b != other.ids_.end()) {
    if (*a == *b) return true;
    if (*a < *b) ++a; else ++b;
  }
  return false;
}

Simplex Simplex::intersection(const Simplex& other) const {
  Simplex out;
  std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                        std::back_inserter(out.ids_));
  return out;
}

std::vector<Simplex> Simplex::facets() const {
  std::vector<Simplex> out;
  if (ids_.size() < 2) return out;
  for (std::size_t skip = 0; skip < ids_.size(); ++skip) {
    Simplex f;
    f.ids_.reserve(ids_.size() - 1);
    for (std::size_t i = 0; i < ids_.size(); ++i)
      if (i != skip) f.ids_.push_back(ids_[i]);
    out.push_back(std::move(f));
  }
  return out;
}

Simplex Simplex::mapped(const std::map<VertexId, VertexId>& f) const {
  std::vector<VertexId> img;
  img.reserve(ids_.size());
  for (auto v : ids_) {
    auto it = f.find(v);
    if (it == f.end()) throw PreconditionError("vertex map undefined on " + std::to_string(v));
    img.push_back(it->second);
  }
  return Simplex(std::move(img));
}

std::string to_string(const Simplex& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ']';
  return os.str();
}

SimplicialComplex SimplicialComplex::closure(std::span<const Simplex> generators) {
  SimplicialComplex k;
  for (const auto& g : generators) {
    if (k.contains(g)) continue;
    const auto n = g.size();
    if (n > 20) throw PreconditionError("simplex too large to close: " + std::to_string(n));
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<VertexId> ids;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) ids.push_back(g[i]);
      k.simplices_.insert(Simplex(std::move(ids)));
    }
  }
  return k;
}

int SimplicialComplex::dim() const {
  int d = -1;
  for (const auto& s : simplices_) d = std::max(d, s.dim());
  return d;
}

std::vector<Simplex> SimplicialComplex::of_dim(int d) const {
  std::vector<Simplex> out;
  for (const auto& s : simplices_)
    if (s.dim() == d) out.push_back(s);
  return out;
}

std::vector<Simplex> SimplicialComplex::maximal() const {
  std::set<Simplex> non_maximal;
  for (const auto& s : simplices_)
    for (auto& f : s.facets()) non_maximal.insert(std::move(f));
  std::vector<Simplex> out;
  for (const auto& s : simplices_)
    if (!non_maximal.count(s)) out.push_back(s);
  return out;
}

std::vector<VertexId> SimplicialComplex::vertices() const {
  std::vector<VertexId> out;
  for (const auto& s : simplices_)
    if (s.dim() == 0) out.push_back(s[0]);
  return out;
}

bool SimplicialComplex::is_downward_closed() const {
  for (const auto& s : simplices_)
    for (const auto& f : s.facets())
      if (!contains(f)) return false;
  return true;
}

SimplexGeometry geometry_of(const PointSet& points, const Simplex& s) {
  SimplexGeometry g;
  g.vertices.reserve(s.size());
  for (auto v : s) {
    if (v >= points.size()) throw PreconditionError("vertex id " + std::to_string(v) + " out of range");
    g.vertices.push_back(points[v]);
  }
  return g;
}

SimplicialComplex star(const SimplicialComplex& k, std::span<const VertexId> q) {
  if (q.empty()) throw PreconditionError("star of an empty vertex set");
  std::vector<Simplex> incident;
  for (const auto& s : k) {
    for (auto v : q)
      if (s.contains(v)) {
        incident.push_back(s);
        break;
      }
  }
  return SimplicialComplex::closure(incident);
}

SimplicialComplex star(const SimplicialComplex& k, std::initializer_list<VertexId> q) {
  return star(k, std::span<const VertexId>(q.begin(), q.size()));
}

bool is_pure(const SimplicialComplex& k, int m) {
  for (const auto& s : k.maximal())
    if (s.dim() != m) return false;
  return true;
}

SimplicialComplex boundary_complex(const SimplicialComplex& k) {
  if (k.empty()) return {};
  const int m = k.dim();
  if (!is_pure(k, m)) throw PreconditionError("boundary_complex needs a pure complex");
  if (m == 0) return {};
  std::map<Simplex, int> cofaces;
  for (const auto& s : k.of_dim(m))
    for (auto& f : s.facets()) ++cofaces[std::move(f)];
  std::vector<Simplex> gens;
  for (const auto& [f, count] : cofaces)
    if (count == 1) gens.push_back(f);
  return SimplicialComplex::closure(gens);
}

namespace {

struct Box {
  Point lo, hi;
};

Box bounding_box(const PointSet& points, const Simplex& s) {
  Box b{points[s[0]], points[s[0]]};
  for (auto v : s) {
    b.lo = b.lo.cwiseMin(points[v]);
    b.hi = b.hi.cwiseMax(points[v]);
  }
  return b;
}

bool boxes_overlap(const Box& a, const Box& b) {
  return (a.lo.array() <= b.hi.array()).all() && (b.lo.array() <= a.hi.array()).all();
}

template <class T>
T to_scalar(double v) {
  return T(v);
}

// Rows encode sum_i lambda_i a_i - sum_j mu_j b_j = 0, sum lambda = 1, sum mu = 1.
template <class T>
void convex_combination_rows(const PointSet& points, const Simplex& a, const Simplex& b,
                             std::size_t extra_cols, std::vector<std::vector<T>>& rows,
                             std::vector<T>& rhs) {
  const int m = points.dim();
  const std::size_t cols = a.size() + b.size() + extra_cols;
  for (int r = 0; r < m; ++r) {
    std::vector<T> row(cols, T(0));
    for (std::size_t i = 0; i < a.size(); ++i) row[i] = to_scalar<T>(points[a[i]](r));
    for (std::size_t j = 0; j < b.size(); ++j) row[a.size() + j] = -to_scalar<T>(points[b[j]](r));
    rows.push_back(std::move(row));
    rhs.push_back(T(0));
  }
  std::vector<T> sum_a(cols, T(0));
  std::vector<T> sum_b(cols, T(0));
  for (std::size_t i = 0; i < a.size(); ++i) sum_a[i] = T(1);
  for (std::size_t j = 0; j < b.size(); ++j) sum_b[a.size() + j] = T(1);
  rows.push_back(std::move(sum_a));
  rhs.push_back(T(1));
  rows.push_back(std::move(sum_b));
  rhs.push_back(T(1));
}

// Largest total barycentric weight that a common point can put on vertices
// of `a` outside the shared face; negative when the simplices are disjoint.
template <class T>
T excess_weight(const PointSet& points, const Simplex& a, const Simplex& b, const T& eps) {
  std::vector<std::vector<T>> rows;
  std::vector<T> rhs;
  convex_combination_rows<T>(points, a, b, 0, rows, rhs);
  std::vector<T> objective(a.size() + b.size(), T(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!b.contains(a[i])) objective[i] = T(1);
  const auto res = lp::maximise(rows, rhs, objective, eps);
  if (res.status != lp::Status::optimal) return T(-1);
  return res.value;
}

// Largest t such that a point of `sigma` has barycentric coordinates >= t in `tau`.
template <class T>
T interior_margin(const PointSet& points, const Simplex& tau, const Simplex& sigma, const T& eps) {
  const std::size_t nt = tau.size();
  const std::size_t ns = sigma.size();
  // Columns: lambda (nt), mu (ns), t, slack (nt).
  std::vector<std::vector<T>> rows;
  std::vector<T> rhs;
  convex_combination_rows<T>(points, tau, sigma, 1 + nt, rows, rhs);
  const std::size_t cols = nt + ns + 1 + nt;
  for (std::size_t i = 0; i < nt; ++i) {
    std::vector<T> row(cols, T(0));
    row[i] = T(1);
    row[nt + ns] = T(-1);
    row[nt + ns + 1 + i] = T(-1);
    rows.push_back(std::move(row));
    rhs.push_back(T(0));
  }
  std::vector<T> objective(cols, T(0));
  objective[nt + ns] = T(1);
  const auto res = lp::maximise(rows, rhs, objective, eps);
  if (res.status != lp::Status::optimal) return T(-1);
  return res.value;
}

constexpr double kFloatingTolerance = 1e-10;
constexpr double kFilterMargin = 1e-6;

bool is_degenerate_exact(const PointSet& points, const Simplex& s) {
  const auto g = geometry_of(points, s);
  return affine_rank_exact(g.vertices) < s.dim();
}

}  // namespace

bool intersect_properly(const PointSet& points, const Simplex& a, const Simplex& b,
                        Arithmetic arithmetic) {
  if (!a.shares_vertex(b) && !boxes_overlap(bounding_box(points, a), bounding_box(points, b)))
    return true;
  if (a.is_face_of(b) || b.is_face_of(a)) return true;
  const double approx = excess_weight<double>(points, a, b, kFloatingTolerance);
  if (arithmetic == Arithmetic::floating) return !(approx > kFloatingTolerance);
  if (approx > kFilterMargin) return false;
  return !(excess_weight<Rational>(points, a, b, Rational(0)) > 0);
}

bool interior_meets(const PointSet& points, const Simplex& tau, const Simplex& sigma,
                    Arithmetic arithmetic) {
  if (!tau.shares_vertex(sigma) &&
      !boxes_overlap(bounding_box(points, tau), bounding_box(points, sigma)))
    return false;
  const double approx = interior_margin<double>(points, tau, sigma, kFloatingTolerance);
  if (arithmetic == Arithmetic::floating) return approx > kFloatingTolerance;
  if (approx > kFilterMargin) return true;
  return interior_margin<Rational>(points, tau, sigma, Rational(0)) > 0;
}

EmbeddingReport is_embedded(const SimplicialComplex& k, const PointSet& points, Arithmetic arithmetic) {
  EmbeddingReport report;
  const auto top = k.maximal();
  for (const auto& s : top) {
    const bool degenerate = arithmetic == Arithmetic::exact
                                ? is_degenerate_exact(points, s)
                                : simplex_metrics(geometry_of(points, s)).degenerate;
    if (s.dim() > 0 && degenerate) {
      report.embedded = false;
      report.violation = {s, s};
      return report;
    }
  }
  for (std::size_t i = 0; i < top.size(); ++i)
    for (std::size_t j = i + 1; j < top.size(); ++j)
      if (!intersect_properly(points, top[i], top[j], arithmetic)) {
        report.embedded = false;
        report.violation = {top[i], top[j]};
        return report;
      }
  return report;
}

TriangulationAtReport is_triangulation_at(const SimplicialComplex& k, const PointSet& points,
                                          VertexId p) {
  TriangulationAtReport r;
  if (!k.contains(Simplex{p})) {
    r.failed_condition = 1;
    r.detail = "vertex " + std::to_string(p) + " not in complex";
    return r;
  }
  const VertexId qs[] = {p};
  const auto st = star(k, qs);

  if (const auto emb = is_embedded(st, points); !emb.embedded) {
    r.failed_condition = 2;
    r.detail = "star not embedded at " + to_string(emb.violation->first) + " / " +
               to_string(emb.violation->second);
    return r;
  }

  const int m = points.dim();
  if (!is_pure(st, m)) {
    r.failed_condition = 3;
    r.detail = "star is not a pure " + std::to_string(m) + "-complex";
    return r;
  }
  if (boundary_complex(st).contains(Simplex{p})) {
    r.failed_condition = 3;
    r.detail = "vertex lies on the boundary of its star";
    return r;
  }

  Box star_box = bounding_box(points, Simplex(st.vertices()));
  const auto star_top = st.of_dim(m);
  for (const auto& tau : k) {
    if (st.contains(tau)) continue;
    if (!boxes_overlap(bounding_box(points, tau), star_box)) continue;
    for (const auto& sigma : star_top)
      if (interior_meets(points, tau, sigma)) {
        r.failed_condition = 4;
        r.detail = "interior of " + to_string(tau) + " meets " + to_string(sigma);
        return r;
      }
  }
  r.holds = true;
  return r;
}

IsomorphismReport star_isomorphic(const SimplicialComplex& k, const SimplicialComplex& k2,
                                  std::span<const VertexId> q, const VertexMap& f) {
  const auto st = star(k, q);
  std::set<VertexId> image_vertices;
  for (auto v : st.vertices()) {
    auto it = f.find(v);
    if (it == f.end()) throw PreconditionError("vertex map is partial: no image for " + std::to_string(v));
    if (!image_vertices.insert(it->second).second)
      throw PreconditionError("vertex map is not injective at " + std::to_string(v));
  }
  std::vector<VertexId> fq;
  for (auto v : q) {
    auto it = f.find(v);
    if (it == f.end()) throw PreconditionError("vertex map is partial: no image for " + std::to_string(v));
    fq.push_back(it->second);
  }
  std::set<Simplex> images;
  for (const auto& s : st) images.insert(s.mapped(f));
  const auto st2 = star(k2, fq);

  IsomorphismReport r;
  std::set_difference(images.begin(), images.end(), st2.begin(), st2.end(),
                      std::back_inserter(r.only_in_first));
  std::set_difference(st2.begin(), st2.end(), images.begin(), images.end(),
                      std::back_inserter(r.only_in_second));
  r.isomorphic = r.only_in_first.empty() && r.only_in_second.empty();
  return r;
}

IsomorphismReport star_isomorphic(const SimplicialComplex& k, const SimplicialComplex& k2,
                                  std::span<const VertexId> q) {
  VertexMap id;
  for (const auto& s : k)
    if (s.dim() == 0) id[s[0]] = s[0];
  for (const auto& s : k2)
    if (s.dim() == 0) id[s[0]] = s[0];
  return star_isomorphic(k, k2, q, id);
}

VertexMap inverse(const VertexMap& f) {
  VertexMap inv;
  for (const auto& [a, b] : f)
    if (!inv.emplace(b, a).second) throw PreconditionError("vertex map is not injective");
  return inv;
}

}  // namespace delstab
