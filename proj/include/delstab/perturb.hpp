#pragma once

// Stability budgets, seeded point perturbations, and the trials that measure
// circumcentre displacement, protection decay and star stability under point,
// relaxation and metric perturbations.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "delstab/genericity.hpp"
#include "delstab/metric.hpp"

namespace delstab {

struct StabilityBudget {
  double rho_cc = 0.0;              // upsilon0 mu0 eps / 8
  double rho_point = 0.0;           // upsilon0 mu0 delta / 18
  double rho_metric_protect = 0.0;  // upsilon0 mu0 delta / 20
  double rho_metric = 0.0;          // upsilon0 mu0 delta / 36
  double rho_generic = 0.0;         // nu~^3 delta / 84
};

/// Evaluated in rational arithmetic and rounded once. Throws unless every
/// input is positive, delta <= eps and upsilon0, mu0, nu_tilde <= 1.
StabilityBudget stability_budget(double upsilon0, double mu0, double delta, double eps, double nu_tilde);

/// Budget for the safe interior simplices of a generic classification
/// (mu0 = nu~, upsilon0 = sqrt(3) nu~^2 / 4).
StabilityBudget stability_budget(const GenericityAnalysis& analysis);

enum class PerturbationModel { uniform, radial, adversarial };

std::string to_string(PerturbationModel model);
PerturbationModel parse_perturbation_model(const std::string& name);

/// zeta(p_i) = p_i + rho * magnitude_i * direction_i with |direction_i| = 1
/// and magnitude_i in [0, 1].
struct PointPerturbation {
  double rho = 0.0;
  std::uint64_t seed = 0;
  PerturbationModel model = PerturbationModel::uniform;
  std::vector<Point> directions;
  std::vector<double> magnitudes;

  Point displacement(VertexId v) const { return rho * magnitudes[v] * directions[v]; }
  PointSet apply(const PointSet& points) const;
  /// Same directions and magnitudes at a different rho.
  PointPerturbation scaled(double new_rho) const;
  double max_displacement() const;
};

/// Throws unless 0 <= rho < sparsity / 2.
PointPerturbation make_point_perturbation(const PointSet& points, double rho, std::uint64_t seed,
                                          PerturbationModel model);

struct TrialVerdict {
  std::string kind;
  bool passed = false;
  bool in_budget = true;
  bool certified = true;
  double budget_used = 0.0;  // the rho of the trial
  std::map<std::string, double> measured;
  std::vector<Simplex> counterexamples;
};

struct SecureParameters {
  double upsilon0 = 0.0;
  double mu0 = 0.0;
  double eps = 0.0;
};

/// |C(perturbed) - C(s)| against 8 rho / (upsilon0 mu0).
TrialVerdict cc_displacement_trial(const SimplexGeometry& s, const SimplexGeometry& perturbed,
                                   const SecureParameters& params, double rho);

/// Every safe m-simplex must stay Delaunay in zeta(P) with protection at least
/// delta - 18 rho / (upsilon0 mu0) - tau.
TrialVerdict protection_decay_trial(const GenericityAnalysis& analysis, const PointPerturbation& zeta);

/// Metric analogue with delta - 20 rho / (upsilon0 mu0) - tau, rho = rho_bound.
TrialVerdict metric_protection_decay_trial(const GenericityAnalysis& analysis, const MetricModel& d);

/// St(P_J; Del(P)) against St(P_J; Del(zeta(P))) under the identity vertex map.
TrialVerdict point_stability_trial(const GenericityAnalysis& analysis, const PointPerturbation& zeta);

/// St(P_J; Del^rho(P)) against St(P_J; Del(P)).
TrialVerdict relaxation_trial(const GenericityAnalysis& analysis, double rho);

struct MetricTrialOptions {
  /// Budget used for the in-budget flag: rho_metric or rho_generic.
  bool corollary_budget = false;
  /// Perturbs the Newton result before comparison; exercises the mismatch path.
  bool inject_fault = false;
};

/// St(P_J; Del_d(P)) by the Newton and pullback paths, both against the Euclidean star.
TrialVerdict metric_stability_trial(const GenericityAnalysis& analysis, const DisplacementField& field,
                                    const MetricTrialOptions& options = {});

/// Domain U for metric models: bounding box of P inflated by 3 eps.
Box metric_domain(const GenericityAnalysis& analysis);

}  // namespace delstab
