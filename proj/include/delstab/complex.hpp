#pragma once

// Abstract simplicial complexes over vertex ids, and the geometric queries
// that realise them through a PointSet: embedding, triangulation at a vertex,
// and star isomorphism under a vertex map.

#include <compare>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "delstab/geometry.hpp"
#include "delstab/types.hpp"

namespace delstab {

/// Sorted, duplicate-free, non-empty vertex tuple.
class Simplex {
 public:
  Simplex() = default;
  Simplex(std::initializer_list<VertexId> ids) : Simplex(std::vector<VertexId>(ids)) {}
  explicit Simplex(std::vector<VertexId> ids);

  int dim() const { return static_cast<int>(ids_.size()) - 1; }
  std::size_t size() const { return ids_.size(); }
  const std::vector<VertexId>& ids() const { return ids_; }
  VertexId operator[](std::size_t i) const { return ids_[i]; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  bool contains(VertexId v) const;
  bool is_face_of(const Simplex& other) const;
  bool shares_vertex(const Simplex& other) const;
  Simplex intersection(const Simplex& other) const;
  /// All faces of codimension one.
  std::vector<Simplex> facets() const;
  /// Image under a vertex map; throws if the map is undefined on a vertex.
  Simplex mapped(const std::map<VertexId, VertexId>& f) const;

  auto operator<=>(const Simplex&) const = default;

 private:
  std::vector<VertexId> ids_;
};

std::string to_string(const Simplex& s);

/// Downward-closed set of simplices.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Smallest complex containing the given simplices.
  static SimplicialComplex closure(std::span<const Simplex> generators);
  static SimplicialComplex closure(std::initializer_list<Simplex> generators) {
    return closure(std::span<const Simplex>(generators.begin(), generators.size()));
  }

  bool contains(const Simplex& s) const { return simplices_.count(s) != 0; }
  bool empty() const { return simplices_.empty(); }
  std::size_t size() const { return simplices_.size(); }
  const std::set<Simplex>& simplices() const { return simplices_; }
  auto begin() const { return simplices_.begin(); }
  auto end() const { return simplices_.end(); }

  int dim() const;
  std::vector<Simplex> of_dim(int d) const;
  std::vector<Simplex> maximal() const;
  std::vector<VertexId> vertices() const;
  bool is_downward_closed() const;

  bool operator==(const SimplicialComplex&) const = default;

 private:
  std::set<Simplex> simplices_;
};

SimplexGeometry geometry_of(const PointSet& points, const Simplex& s);

/// Closure of all simplices sharing a face with a simplex that has a vertex
/// in q; since any shared vertex is a shared face, these are exactly the
/// simplices with a vertex in q.
SimplicialComplex star(const SimplicialComplex& k, std::span<const VertexId> q);
SimplicialComplex star(const SimplicialComplex& k, std::initializer_list<VertexId> q);

/// Closure of the (m-1)-simplices incident to exactly one m-simplex, for a
/// pure m-complex.
SimplicialComplex boundary_complex(const SimplicialComplex& k);

/// True iff every maximal simplex has dimension m.
bool is_pure(const SimplicialComplex& k, int m);

enum class Arithmetic { exact, floating };

struct EmbeddingReport {
  bool embedded = true;
  /// First improperly intersecting pair; a degenerate simplex is reported paired with itself.
  std::optional<std::pair<Simplex, Simplex>> violation;
};

/// Every pair of simplices meets in a common (possibly empty) face and no
/// simplex is degenerate. `exact` confirms near-ties with rational arithmetic;
/// `floating` decides with a 1e-10 tolerance on barycentric margins.
EmbeddingReport is_embedded(const SimplicialComplex& k, const PointSet& points,
                            Arithmetic arithmetic = Arithmetic::exact);

/// True iff the two geometric simplices intersect in a common face.
bool intersect_properly(const PointSet& points, const Simplex& a, const Simplex& b,
                        Arithmetic arithmetic = Arithmetic::exact);

/// True iff some point with all-positive barycentric coordinates in `tau` lies in `sigma`.
bool interior_meets(const PointSet& points, const Simplex& tau, const Simplex& sigma,
                    Arithmetic arithmetic = Arithmetic::exact);

struct TriangulationAtReport {
  bool holds = false;
  /// 0 when holds; otherwise the first failing condition (1 vertex, 2 embedded
  /// star, 3 interior point, 4 no foreign interior intersections).
  int failed_condition = 0;
  std::string detail;
};

TriangulationAtReport is_triangulation_at(const SimplicialComplex& k, const PointSet& points,
                                          VertexId p);

using VertexMap = std::map<VertexId, VertexId>;

struct IsomorphismReport {
  bool isomorphic = false;
  /// Images of St(Q;K) simplices missing from St(f(Q);K2).
  std::vector<Simplex> only_in_first;
  /// Simplices of St(f(Q);K2) that are not images.
  std::vector<Simplex> only_in_second;
};

/// Checks that f maps St(Q;K) bijectively onto St(f(Q);K2). The map must be
/// defined and injective on every vertex of St(Q;K).
IsomorphismReport star_isomorphic(const SimplicialComplex& k, const SimplicialComplex& k2,
                                  std::span<const VertexId> q, const VertexMap& f);

/// Identity-map variant for complexes over the same index set.
IsomorphismReport star_isomorphic(const SimplicialComplex& k, const SimplicialComplex& k2,
                                  std::span<const VertexId> q);

VertexMap inverse(const VertexMap& f);

}  // namespace delstab
