#pragma once

// Sampling parameters, deep interior points, protection classification of the
// two-ring around a chosen vertex set, and the thickness/lemma audits built on it.

#include <limits>
#include <map>
#include <span>
#include <vector>

#include "delstab/complex.hpp"
#include "delstab/delaunay.hpp"
#include "delstab/hull.hpp"

namespace delstab {

struct SamplingReport {
  double epsilon = 0.0;   // sup of d(x, P) over the eroded hull D_eps
  double sparsity = 0.0;  // minimum pairwise distance
  double mu0 = 0.0;       // sparsity / epsilon
};

struct SamplingOptions {
  /// Boundary sweep pitch as a fraction of the sparsity.
  double pitch_fraction = 1.0 / 16.0;
  double relative_precision = 1e-13;
};

/// eps solves eps = sup_{x in D_eps} d(x, P); D_eps is the hull eroded by eps.
SamplingReport sampling_parameters(const PointSet& points, const SamplingOptions& options = {});
SamplingReport sampling_parameters(const PointSet& points, const ConvexHull& hull,
                                   const DelaunayResult& del, const SamplingOptions& options = {});

/// sup of d(x, P) over D_e, from circumcentres in D_e and a sweep of its boundary.
double eroded_hull_coverage(const PointSet& points, const ConvexHull& hull, const DelaunayResult& del,
                            double e, double pitch);

/// Vertices at distance >= 4 eps from the hull boundary.
std::vector<VertexId> deep_interior(const PointSet& points, double eps);
std::vector<VertexId> deep_interior(const PointSet& points, const ConvexHull& hull, double eps);

struct ProtectionReport {
  std::map<Simplex, double> per_simplex;
  double delta_global = 0.0;  // min over audited simplices, clamped to eps
  double delta_raw = 0.0;     // unclamped minimum
  double nu_tilde = 0.0;
  bool generic = false;
  double tolerance = 0.0;
};

struct SafeInteriorClassification {
  std::vector<VertexId> deep;
  std::vector<VertexId> selected;  // P_J
  SimplicialComplex safe_simplices;
  std::vector<DelaunayBall> audited;
  bool audited_radius_below_eps = true;
};

struct GenericityAnalysis {
  PointSet points;
  SamplingReport sampling;
  ConvexHull hull;
  DelaunayResult delaunay;
  ProtectionReport protection;
  SafeInteriorClassification safe;

  int dim() const { return hull.dim(); }
  /// sqrt(3) nu~^2 / 4.
  double upsilon0() const;
  /// Safe m-simplices.
  std::vector<Simplex> safe_top_simplices() const;
};

/// Audits every m-simplex of St(St(P_J)). Throws unless P_J is a non-empty
/// subset of the deep interior.
GenericityAnalysis classify_generic(const PointSet& points, std::span<const VertexId> pj);
GenericityAnalysis classify_generic(const PointSet& points, std::span<const VertexId> pj,
                                    const SamplingReport& sampling);

struct ThicknessWitness {
  Simplex simplex;
  double thickness = 0.0;
  bool passes = false;
};

struct ThicknessCertificate {
  double upsilon0 = 0.0;
  double nu_tilde = 0.0;
  std::vector<ThicknessWitness> witnesses;
  double min_thickness = 0.0;
  double margin = 0.0;  // min_thickness - upsilon0
  bool valid = false;
};

/// Throws PreconditionError on non-generic classifications.
ThicknessCertificate thickness_certificate(const GenericityAnalysis& analysis);

struct CheckCount {
  int pass = 0;
  int fail = 0;
  double min_margin = std::numeric_limits<double>::infinity();  // smallest measured - bound
  void record(double margin);
};

struct AuditedSimplex {
  Simplex simplex;
  double radius = 0.0;
  double protection = 0.0;
  double thickness = 0.0;
  double shortest_edge = 0.0;
  double min_altitude = 0.0;
  bool secure = false;
};

struct LemmaAudit {
  bool generic = false;
  SamplingReport sampling;
  double delta = 0.0;
  double nu_tilde = 0.0;
  double upsilon0 = 0.0;
  double upsilon0_conservative = 0.0;  // sqrt(3) nu~^2 / (4m)
  std::vector<AuditedSimplex> simplices;
  CheckCount separation;    // shortest edge vs delta
  CheckCount altitude;      // altitudes vs sqrt(3) delta^2 / (2 eps)
  CheckCount circumradius;  // R vs eps for simplices with a 2eps-deep vertex
  CheckCount thickness;     // thickness vs upsilon0

  bool all_pass() const;
};

LemmaAudit lemma_audit(const GenericityAnalysis& analysis);

}  // namespace delstab
