#include "delstab/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "delstab/predicates.hpp"
#include "delstab/relaxed.hpp"
#include "delstab/rng.hpp"

namespace delstab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// mpq_get_d truncates, so each budget is rounded toward zero.
double to_double(const Rational& r) { return r.convert_to<double>(); }

std::vector<Simplex> symmetric_difference(const std::vector<Simplex>& a, const std::vector<Simplex>& b) {
  std::vector<Simplex> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void require_generic(const GenericityAnalysis& analysis) {
  if (!analysis.protection.generic)
    throw PreconditionError("trial requires a generic classification");
}

}  // namespace

StabilityBudget stability_budget(double upsilon0, double mu0, double delta, double eps, double nu_tilde) {
  for (double x : {upsilon0, mu0, delta, eps, nu_tilde})
    if (!(x > 0.0) || !std::isfinite(x)) throw PreconditionError("budget inputs must be positive and finite");
  if (delta > eps) throw PreconditionError("budget requires delta <= eps");
  if (upsilon0 > 1.0 || mu0 > 1.0 || nu_tilde > 1.0)
    throw PreconditionError("budget requires upsilon0, mu0, nu_tilde <= 1");
  const Rational u(upsilon0), m(mu0), d(delta), e(eps), n(nu_tilde);
  StabilityBudget b;
  b.rho_cc = to_double(u * m * e / 8);
  b.rho_point = to_double(u * m * d / 18);
  b.rho_metric_protect = to_double(u * m * d / 20);
  b.rho_metric = to_double(u * m * d / 36);
  b.rho_generic = to_double(n * n * n * d / 84);
  return b;
}

StabilityBudget stability_budget(const GenericityAnalysis& analysis) {
  require_generic(analysis);
  const auto& p = analysis.protection;
  return stability_budget(analysis.upsilon0(), p.nu_tilde, p.delta_global, analysis.sampling.epsilon,
                          p.nu_tilde);
}

std::string to_string(PerturbationModel model) {
  switch (model) {
    case PerturbationModel::uniform:
      return "uniform";
    case PerturbationModel::radial:
      return "radial";
    case PerturbationModel::adversarial:
      return "adversarial";
  }
  return "uniform";
}

PerturbationModel parse_perturbation_model(const std::string& name) {
  if (name == "uniform") return PerturbationModel::uniform;
  if (name == "radial") return PerturbationModel::radial;
  if (name == "adversarial") return PerturbationModel::adversarial;
  throw PreconditionError("unknown perturbation model '" + name + "'");
}

PointSet PointPerturbation::apply(const PointSet& points) const {
  std::vector<Point> out;
  out.reserve(points.size());
  for (VertexId v = 0; v < points.size(); ++v) out.push_back(points[v] + displacement(v));
  return PointSet(std::move(out));
}

PointPerturbation PointPerturbation::scaled(double new_rho) const {
  PointPerturbation p = *this;
  p.rho = new_rho;
  return p;
}

double PointPerturbation::max_displacement() const {
  double best = 0.0;
  for (VertexId v = 0; v < directions.size(); ++v) best = std::max(best, displacement(v).norm());
  return best;
}

PointPerturbation make_point_perturbation(const PointSet& points, double rho, std::uint64_t seed,
                                          PerturbationModel model) {
  if (!(rho >= 0.0)) throw PreconditionError("rho must be >= 0");
  if (!(rho < 0.5 * points.min_pairwise_distance()))
    throw PreconditionError("rho must be below half the sparsity");
  const int m = points.dim();
  const std::size_t n = points.size();
  PointPerturbation z;
  z.rho = rho;
  z.seed = seed;
  z.model = model;
  z.directions.assign(n, Point::Unit(m, 0));
  z.magnitudes.assign(n, 0.0);

  switch (model) {
    case PerturbationModel::uniform: {
      Rng rng(split_seed(seed, 0));
      for (VertexId v = 0; v < n; ++v) {
        const Point u = rng.in_ball(m, 1.0);
        const double r = u.norm();
        if (r > 0.0) {
          z.directions[v] = u / r;
          z.magnitudes[v] = std::min(1.0, r);
        }
      }
      break;
    }
    case PerturbationModel::radial: {
      Point centroid = Point::Zero(m);
      for (const auto& p : points) centroid += p;
      centroid /= static_cast<double>(n);
      for (VertexId v = 0; v < n; ++v) {
        const Point d = points[v] - centroid;
        if (d.norm() > 0.0) {
          z.directions[v] = d / d.norm();
          z.magnitudes[v] = 1.0;
        }
      }
      break;
    }
    case PerturbationModel::adversarial: {
      // Move each point by exactly rho toward the centre of the foreign
      // Delaunay sphere it is closest to, eating into that ball's protection.
      const auto del = delaunay_lifted(points);
      for (VertexId v = 0; v < n; ++v) {
        double gap = kInf;
        for (const auto& b : del.balls) {
          if (b.simplex.contains(v)) continue;
          const double g = std::abs((points[v] - b.centre).norm() - b.radius);
          const Point d = b.centre - points[v];
          if (g < gap && d.norm() > 0.0) {
            gap = g;
            z.directions[v] = d / d.norm();
            z.magnitudes[v] = 1.0;
          }
        }
      }
      break;
    }
  }
  return z;
}

TrialVerdict cc_displacement_trial(const SimplexGeometry& s, const SimplexGeometry& perturbed,
                                   const SecureParameters& params, double rho) {
  const auto c = circumcentre(s);
  const auto ct = circumcentre(perturbed);
  if (!c || !ct) throw PreconditionError("circumcentre displacement needs non-degenerate simplices");
  TrialVerdict v;
  v.kind = "cc_displacement";
  v.budget_used = rho;
  v.in_budget = rho <= params.upsilon0 * params.mu0 * params.eps / 8.0;
  const double disp = (ct->centre - c->centre).norm();
  const double bound = 8.0 * rho / (params.upsilon0 * params.mu0);
  v.measured["displacement"] = disp;
  v.measured["bound"] = bound;
  v.passed = disp < bound || (rho == 0.0 && disp <= 1e-12 * c->radius);
  return v;
}

TrialVerdict protection_decay_trial(const GenericityAnalysis& analysis, const PointPerturbation& zeta) {
  require_generic(analysis);
  const auto budget = stability_budget(analysis);
  const double u0 = analysis.upsilon0();
  const double mu0 = analysis.protection.nu_tilde;
  const double delta = analysis.protection.delta_global;
  const double tau = analysis.protection.tolerance;

  TrialVerdict v;
  v.kind = "protection_decay";
  v.budget_used = zeta.rho;
  v.in_budget = zeta.rho <= budget.rho_point;
  const double floor = delta - 18.0 * zeta.rho / (u0 * mu0) - tau;

  const auto moved = zeta.apply(analysis.points);
  const auto del = delaunay_lifted(moved);
  double residual = kInf;
  v.passed = true;
  for (const auto& s : analysis.safe_top_simplices()) {
    const DelaunayBall* b = del.ball(s);
    if (!b) {
      v.passed = false;
      v.counterexamples.push_back(s);
      continue;
    }
    residual = std::min(residual, b->protection);
    if (b->protection < floor) {
      v.passed = false;
      v.counterexamples.push_back(s);
    }
  }
  v.measured["delta"] = delta;
  v.measured["floor"] = floor;
  v.measured["residual_protection"] = residual;
  return v;
}

TrialVerdict metric_protection_decay_trial(const GenericityAnalysis& analysis, const MetricModel& d) {
  require_generic(analysis);
  const auto budget = stability_budget(analysis);
  const double u0 = analysis.upsilon0();
  const double mu0 = analysis.protection.nu_tilde;
  const double delta = analysis.protection.delta_global;
  const double tau = analysis.protection.tolerance;
  const double rho = d.rho_bound();

  TrialVerdict v;
  v.kind = "metric_protection_decay";
  v.budget_used = rho;
  v.in_budget = rho <= budget.rho_metric_protect;
  const double floor = delta - 20.0 * rho / (u0 * mu0) - tau;

  const auto res = metric_delaunay(analysis.points, d, analysis.safe.selected, analysis.sampling.epsilon);
  v.certified = res.certified;
  double residual = kInf;
  v.passed = res.certified;
  for (const auto& s : analysis.safe_top_simplices()) {
    const DelaunayBall* b = res.result.ball(s);
    if (!b || b->protection < floor) {
      v.passed = false;
      v.counterexamples.push_back(s);
      continue;
    }
    residual = std::min(residual, b->protection);
  }
  v.measured["delta"] = delta;
  v.measured["floor"] = floor;
  v.measured["residual_protection"] = residual;
  return v;
}

TrialVerdict point_stability_trial(const GenericityAnalysis& analysis, const PointPerturbation& zeta) {
  require_generic(analysis);
  const auto budget = stability_budget(analysis);
  TrialVerdict v;
  v.kind = "point_stability";
  v.budget_used = zeta.rho;
  v.in_budget = zeta.rho <= budget.rho_point;

  const auto moved = zeta.apply(analysis.points);
  const auto del = delaunay_lifted(moved);
  const auto rep = star_isomorphic(analysis.delaunay.complex, del.complex, analysis.safe.selected);
  v.passed = rep.isomorphic;
  v.counterexamples = rep.only_in_first;
  v.counterexamples.insert(v.counterexamples.end(), rep.only_in_second.begin(), rep.only_in_second.end());
  v.measured["symmetric_difference"] = static_cast<double>(v.counterexamples.size());
  v.measured["max_displacement"] = zeta.max_displacement();
  return v;
}

TrialVerdict relaxation_trial(const GenericityAnalysis& analysis, double rho) {
  require_generic(analysis);
  const auto budget = stability_budget(analysis);
  TrialVerdict v;
  v.kind = "relaxation";
  v.budget_used = rho;
  v.in_budget = rho <= budget.rho_point;

  const auto relaxed = relaxed_delaunay(analysis.points, rho, analysis.safe.selected, analysis.sampling.epsilon);
  const auto& expected = analysis.safe.safe_simplices;
  std::vector<Simplex> a(relaxed.complex.begin(), relaxed.complex.end());
  std::vector<Simplex> b(expected.begin(), expected.end());
  std::vector<Simplex> extra, missing;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(extra));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(missing));

  v.certified = relaxed.certified && relaxed.exhaustive;
  v.passed = v.certified && extra.empty() && missing.empty();
  v.counterexamples = extra;
  v.counterexamples.insert(v.counterexamples.end(), missing.begin(), missing.end());
  v.counterexamples.insert(v.counterexamples.end(), relaxed.undecided.begin(), relaxed.undecided.end());
  v.measured["extra"] = static_cast<double>(extra.size());
  v.measured["missing"] = static_cast<double>(missing.size());
  v.measured["undecided"] = static_cast<double>(relaxed.undecided.size());
  v.measured["candidates"] = static_cast<double>(relaxed.candidates);
  return v;
}

Box metric_domain(const GenericityAnalysis& analysis) {
  return Box::around(analysis.points, 3.0 * analysis.sampling.epsilon);
}

TrialVerdict metric_stability_trial(const GenericityAnalysis& analysis, const DisplacementField& field,
                                    const MetricTrialOptions& options) {
  require_generic(analysis);
  const auto budget = stability_budget(analysis);
  const Box domain = metric_domain(analysis);
  const auto d = MetricModel::pullback(field, domain);
  const double eps = analysis.sampling.epsilon;
  const int m = analysis.dim();

  TrialVerdict v;
  v.kind = options.corollary_budget ? "metric_corollary" : "metric";
  v.budget_used = d.rho_bound();
  v.in_budget = d.rho_bound() <= (options.corollary_budget ? budget.rho_generic : budget.rho_metric);

  double boundary = kInf;
  for (const auto& b : analysis.safe.audited)
    for (auto p : b.simplex) boundary = std::min(boundary, domain.distance_to_boundary(analysis.points[p]));
  v.measured["vertex_to_domain_boundary"] = boundary;
  v.in_budget = v.in_budget && boundary >= 2.0 * eps;

  const auto newton = metric_delaunay(analysis.points, d, analysis.safe.selected, eps);
  const auto pulled = metric_delaunay_pullback(analysis.points, d, analysis.safe.selected);
  auto newton_top = newton.result.top_simplices();
  const auto pulled_top = pulled.result.top_simplices();
  const auto euclid_top = analysis.safe.safe_simplices.of_dim(m);
  if (options.inject_fault && !newton_top.empty()) newton_top.erase(newton_top.begin());

  const auto path_diff = symmetric_difference(newton_top, pulled_top);
  const auto star_diff = symmetric_difference(pulled_top, euclid_top);
  v.certified = newton.certified;
  v.measured["paths_agree"] = path_diff.empty() ? 1.0 : 0.0;
  v.measured["symmetric_difference"] = static_cast<double>(star_diff.size());
  v.measured["not_found"] = static_cast<double>(newton.not_found.size());
  v.passed = path_diff.empty() && star_diff.empty() && newton.certified;
  v.counterexamples = path_diff.empty() ? star_diff : path_diff;
  return v;
}

}  // namespace delstab
