#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "delstab/generators.hpp"
#include "delstab/genericity.hpp"
#include "delstab/io.hpp"
#include "delstab/metric.hpp"
#include "delstab/perturb.hpp"
#include "delstab/relaxed.hpp"
#include "delstab/rng.hpp"

#ifndef DELSTAB_VERSION
#define DELSTAB_VERSION "dev"
#endif

namespace delstab::cli {

namespace {

using io::json;

struct Config {
  std::string command;
  std::vector<std::string> in;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 1;
  int dim = 2;
  std::string pj = "auto";
  std::vector<double> fractions{1.0};
  int seeds = 1;
  bool force = false;
  bool inject_fault = false;

  // gen
  std::string kind = "grid";
  int side = 6;
  std::size_t n = 40;
  double spacing = 1.0;
  double jitter = 0.0;
  int k = 10;

  // stability
  std::string mode = "point";
  std::vector<std::string> models{"uniform"};
  std::string batch;
  bool corollary = false;

  // relax / metric
  double rho = -1.0;
  double amplitude = -1.0;
  double wavelength = 0.0;

  // compare
  std::string mapping;

  // budget from explicit parameters
  double upsilon0 = 0.0, mu0 = 0.0, delta = 0.0, eps = 0.0, nu_tilde = 0.0;

  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

class CheckFailed : public Error {
 public:
  using Error::Error;
};

struct Output {
  std::string text;
  int code = kOk;
};

json config_echo(const Config& c) {
  json j{{"in", c.in}, {"format", c.format}, {"seed", c.seed}, {"pj", c.pj}};
  if (c.command == "gen") {
    j.update({{"kind", c.kind}, {"dim", c.dim}, {"side", c.side}, {"n", c.n}, {"spacing", c.spacing},
              {"jitter", c.jitter}, {"k", c.k}});
  } else if (c.command == "stability") {
    j.update({{"mode", c.mode}, {"models", c.models}, {"budget_fraction", c.fractions}, {"seeds_count", c.seeds},
              {"force", c.force}, {"corollary", c.corollary}, {"batch", c.batch}});
  } else if (c.command == "relax") {
    j.update({{"rho", c.rho}, {"budget_fraction", c.fractions}});
  } else if (c.command == "metric") {
    j.update({{"amplitude", c.amplitude}, {"wavelength", c.wavelength}, {"budget_fraction", c.fractions}});
  } else if (c.command == "compare") {
    j.update({{"map", c.mapping}});
  }
  return j;
}

json envelope(const Config& c) {
  return {{"tool", "delstab"}, {"version", DELSTAB_VERSION}, {"command", c.command}, {"config", config_echo(c)}};
}

// Timings are the only non-deterministic part of a report.
std::string finish(json env, const Config& c, int indent) {
  const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - c.start;
  env["timings"] = {{"total_ms", ms.count()}};
  return env.dump(indent) + "\n";
}

json dataset_json(const PointSet& p) {
  return {{"digest", io::dataset_digest(p)}, {"n", p.size()}, {"dim", p.dim()}};
}

const std::string& single_input(const Config& c) {
  if (c.in.size() != 1) throw PreconditionError(c.command + " needs exactly one --in");
  return c.in.front();
}

std::vector<VertexId> select_pj(const Config& c, const PointSet& p, const SamplingReport& s) {
  if (c.pj == "auto") return deep_interior(p, s.epsilon);
  auto ids = io::parse_id_list(c.pj);
  for (auto v : ids)
    if (v >= p.size()) throw PreconditionError("P_J id " + std::to_string(v) + " out of range");
  return ids;
}

GenericityAnalysis analyse(const Config& c, const PointSet& p) {
  const auto s = sampling_parameters(p);
  const auto pj = select_pj(c, p, s);
  if (pj.empty()) throw PreconditionError("no deep interior points to select");
  return classify_generic(p, pj, s);
}

std::string join_ids(const Simplex& s) {
  std::string out;
  for (auto v : s) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v);
  }
  return out;
}

std::string num(double x) {
  std::ostringstream ss;
  ss.precision(17);
  ss << x;
  return ss.str();
}

json protection_json(const ProtectionReport& r) {
  return {{"delta", r.delta_global}, {"delta_raw", r.delta_raw}, {"nu_tilde", r.nu_tilde},
          {"generic", r.generic},    {"tolerance", r.tolerance}};
}

// --- gen -------------------------------------------------------------------

Output cmd_gen(const Config& c, std::ostream& err) {
  PointSet p;
  if (c.kind == "grid") {
    p = jittered_grid(c.side, c.dim, c.spacing, c.jitter, c.seed);
  } else if (c.kind == "uniform") {
    if (c.n < static_cast<std::size_t>(c.dim) + 1) throw PreconditionError("uniform needs n >= dim + 1");
    p = uniform_box(c.n, c.dim, c.seed);
  } else if (c.kind == "delta-search") {
    auto r = delta_search(c.side, c.dim, c.spacing, c.jitter, c.k, c.seed);
    err << "delta-search: kept candidate " << r.best << " of " << c.k << ", delta " << num(r.delta) << "\n";
    p = std::move(r.points);
  } else {
    throw PreconditionError("unknown generator '" + c.kind + "'");
  }
  return {io::format_points(p), kOk};
}

// --- analyze ---------------------------------------------------------------

Output cmd_analyze(const Config& c) {
  const auto p = io::read_points(single_input(c));
  const auto s = sampling_parameters(p);
  json env = envelope(c);
  env["dataset"] = dataset_json(p);
  env["sampling"] = io::sampling_to_json(s);
  const auto pj = select_pj(c, p, s);
  env["pj"] = pj;

  if (pj.empty()) {
    const auto del = delaunay_lifted(p);
    const double delta = std::max(0.0, del.min_protection());
    env["status"] = del.generic ? "no-deep-interior" : "non-generic";
    env["protection"] = {{"delta", delta}, {"generic", del.generic}, {"tolerance", del.tolerance}};
    return {finish(env, c, 2), kPrecondition};
  }

  const auto a = classify_generic(p, pj, s);
  const auto audit = lemma_audit(a);
  env["protection"] = protection_json(a.protection);
  env["audit"] = io::audit_to_json(audit);
  int code = kOk;
  if (!a.protection.generic) {
    env["status"] = "non-generic";
    code = kPrecondition;
  } else {
    const auto cert = thickness_certificate(a);
    env["certificate"] = io::certificate_to_json(cert);
    const bool ok = cert.valid && audit.all_pass();
    env["status"] = ok ? "ok" : "checks-failed";
    code = ok ? kOk : kCheckFailed;
  }

  if (c.format == "csv") {
    std::string csv = "vertices,radius,protection,thickness,secure\n";
    for (const auto& x : audit.simplices)
      csv += join_ids(x.simplex) + "," + num(x.radius) + "," + num(x.protection) + "," + num(x.thickness) + "," +
             (x.secure ? "1" : "0") + "\n";
    return {csv, code};
  }
  return {finish(env, c, 2), code};
}

// --- stability ---------------------------------------------------------------

struct Row {
  TrialVerdict verdict;
  double fraction;
  std::string model;
  int seed_index;
};

Output cmd_stability(Config c, std::ostream& err) {
  if (!c.batch.empty()) {
    const auto b = io::parse_trial_batch(json::parse(io::read_text(c.batch)));
    if (!b.dataset.empty() && c.in.empty()) c.in = {b.dataset};
    if (!b.pj.empty()) {
      c.pj.clear();
      for (auto v : b.pj) c.pj += (c.pj.empty() ? "" : ",") + std::to_string(v);
    }
    c.fractions = b.budgets;
    c.seeds = b.seeds;
    c.models.clear();
    for (auto m : b.models) c.models.push_back(to_string(m));
  }
  if (c.mode != "point" && c.mode != "metric" && c.mode != "relax")
    throw PreconditionError("unknown mode '" + c.mode + "'");
  std::vector<PerturbationModel> models;
  for (const auto& m : c.models) models.push_back(parse_perturbation_model(m));

  const auto p = io::read_points(single_input(c));
  const auto a = analyse(c, p);
  if (!a.protection.generic) throw PreconditionError("dataset is not generic for the selected P_J");
  if (!lemma_audit(a).all_pass()) {
    if (!c.force) throw CheckFailed("analysis checks failed; rerun with --force to continue");
    err << "warning: analysis checks failed, continuing because of --force\n";
  }
  const auto budget = stability_budget(a);
  const int m = a.dim();

  std::vector<Row> rows;
  for (double f : c.fractions) {
    if (c.mode == "point") {
      for (auto model : models)
        for (int s = 0; s < c.seeds; ++s) {
          const auto z = make_point_perturbation(p, f * budget.rho_point, split_seed(c.seed, s), model);
          rows.push_back({point_stability_trial(a, z), f, to_string(model), s});
          rows.push_back({protection_decay_trial(a, z), f, to_string(model), s});
        }
    } else if (c.mode == "metric") {
      MetricTrialOptions opt;
      opt.corollary_budget = c.corollary;
      opt.inject_fault = c.inject_fault;
      const double rho = f * (c.corollary ? budget.rho_generic : budget.rho_metric);
      const double wavelength = c.wavelength > 0 ? c.wavelength : 2.0 * a.sampling.epsilon;
      for (int s = 0; s < c.seeds; ++s) {
        const auto field = DisplacementField::sinusoidal(m, rho / 2, wavelength, split_seed(c.seed, s));
        rows.push_back({metric_stability_trial(a, field, opt), f, "sinusoidal", s});
        const auto decay_field =
            DisplacementField::sinusoidal(m, f * budget.rho_metric_protect / 2, wavelength, split_seed(c.seed, s));
        rows.push_back({metric_protection_decay_trial(a, MetricModel::pullback(decay_field, metric_domain(a))), f,
                        "sinusoidal", s});
      }
    } else {
      rows.push_back({relaxation_trial(a, f * budget.rho_point), f, "none", 0});
    }
  }

  int code = kOk;
  json summary = json::array();
  for (double f : c.fractions) {
    int trials = 0, passed = 0, in_budget = 0;
    for (const auto& r : rows)
      if (r.fraction == f) {
        ++trials;
        passed += r.verdict.passed;
        in_budget += r.verdict.in_budget;
      }
    summary.push_back({{"fraction", f}, {"trials", trials}, {"passed", passed}, {"in_budget", in_budget}});
  }
  for (const auto& r : rows) {
    if (r.verdict.in_budget && !r.verdict.passed) code = kCheckFailed;
    if (auto it = r.verdict.measured.find("paths_agree"); it != r.verdict.measured.end() && it->second == 0.0) {
      err << "error: Newton and pullback paths disagree (fraction " << r.fraction << ", seed " << r.seed_index
          << ")\n";
      code = kCheckFailed;
    }
  }

  std::string text;
  if (c.format == "csv") {
    text = "kind,fraction,model,seed_index,rho,in_budget,passed,certified\n";
    for (const auto& r : rows)
      text += r.verdict.kind + "," + num(r.fraction) + "," + r.model + "," + std::to_string(r.seed_index) + "," +
              num(r.verdict.budget_used) + "," + std::to_string(r.verdict.in_budget) + "," +
              std::to_string(r.verdict.passed) + "," + std::to_string(r.verdict.certified) + "\n";
    return {text, code};
  }
  for (const auto& r : rows) {
    json j = io::verdict_to_json(r.verdict);
    j["fraction"] = r.fraction;
    j["model"] = r.model;
    j["seed_index"] = r.seed_index;
    text += j.dump() + "\n";
  }
  json env = envelope(c);
  env["dataset"] = dataset_json(p);
  env["budget"] = io::budget_to_json(budget);
  env["summary"] = summary;
  env["status"] = code == kOk ? "ok" : "checks-failed";
  text += finish(env, c, -1);
  return {text, code};
}

// --- relax -------------------------------------------------------------------

Output cmd_relax(const Config& c) {
  const auto p = io::read_points(single_input(c));
  const auto a = analyse(c, p);
  double rho = c.rho;
  if (rho < 0) {
    if (c.fractions.size() != 1) throw PreconditionError("relax takes a single --budget-fraction");
    rho = c.fractions.front() * stability_budget(a).rho_point;
  }
  const auto r = relaxed_delaunay(p, rho, a.safe.selected, a.sampling.epsilon);
  json env = envelope(c);
  env["dataset"] = dataset_json(p);
  env["pj"] = a.safe.selected;
  env["rho"] = rho;
  env["certified"] = r.certified;
  env["exhaustive"] = r.exhaustive;
  env["candidates"] = r.candidates;
  env["equals_delaunay_star"] = r.complex == a.safe.safe_simplices;
  env["complex"] = io::complex_to_json(r.complex);
  json w = json::array();
  for (const auto& x : r.witnesses)
    w.push_back({{"simplex", std::vector<VertexId>(x.simplex.begin(), x.simplex.end())},
                 {"centre", std::vector<double>(x.centre.data(), x.centre.data() + x.centre.size())},
                 {"gap", x.gap}});
  env["witnesses"] = w;
  json u = json::array();
  for (const auto& s : r.undecided) u.push_back(std::vector<VertexId>(s.begin(), s.end()));
  env["undecided"] = u;
  return {finish(env, c, 2), r.certified ? kOk : kCheckFailed};
}

// --- metric ------------------------------------------------------------------

Output cmd_metric(const Config& c, std::ostream& err) {
  const auto p = io::read_points(single_input(c));
  const auto a = analyse(c, p);
  double amplitude = c.amplitude;
  if (amplitude < 0) {
    if (c.fractions.size() != 1) throw PreconditionError("metric takes a single --budget-fraction");
    amplitude = c.fractions.front() * stability_budget(a).rho_metric / 2;
  }
  const double wavelength = c.wavelength > 0 ? c.wavelength : 2.0 * a.sampling.epsilon;
  const auto field = DisplacementField::sinusoidal(a.dim(), amplitude, wavelength, c.seed);
  const auto d = MetricModel::pullback(field, metric_domain(a));
  const auto newton = metric_delaunay(p, d, a.safe.selected, a.sampling.epsilon);
  const auto pulled = metric_delaunay_pullback(p, d, a.safe.selected);
  auto newton_top = newton.result.top_simplices();
  if (c.inject_fault && !newton_top.empty()) newton_top.erase(newton_top.begin());
  const bool agree = newton_top == pulled.result.top_simplices();
  const bool unchanged = pulled.result.top_simplices() == a.safe.safe_simplices.of_dim(a.dim());

  json env = envelope(c);
  env["dataset"] = dataset_json(p);
  env["pj"] = a.safe.selected;
  env["amplitude"] = amplitude;
  env["rho_bound"] = d.rho_bound();
  env["paths_agree"] = agree;
  env["certified"] = newton.certified;
  env["star_unchanged"] = unchanged;
  json nf = json::array();
  for (const auto& s : newton.not_found) nf.push_back(std::vector<VertexId>(s.begin(), s.end()));
  env["not_found"] = nf;
  env["complex"] = io::complex_to_json(newton.result.complex, newton.result.balls);
  if (!agree) err << "error: Newton and pullback paths disagree\n";
  return {finish(env, c, 2), agree && newton.certified ? kOk : kCheckFailed};
}

// --- compare -----------------------------------------------------------------

VertexMap read_mapping(const std::string& path, const SimplicialComplex& k) {
  VertexMap f;
  if (path.empty()) {
    for (auto v : k.vertices()) f[v] = v;
    return f;
  }
  const json j = json::parse(io::read_text(path));
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) f[i] = j[i].get<VertexId>();
  } else if (j.is_object()) {
    for (const auto& [key, value] : j.items()) f[io::parse_id_list(key).at(0)] = value.get<VertexId>();
  } else {
    throw ParseError("mapping must be an array or an object");
  }
  return f;
}

Output cmd_compare(const Config& c) {
  if (c.in.size() != 2) throw PreconditionError("compare needs two --in files");
  const auto k1 = io::complex_from_json(json::parse(io::read_text(c.in[0])));
  const auto k2 = io::complex_from_json(json::parse(io::read_text(c.in[1])));
  const auto f = read_mapping(c.mapping, k1);
  const auto q = c.pj == "auto" ? k1.vertices() : io::parse_id_list(c.pj);
  const auto r = star_isomorphic(k1, k2, q, f);

  auto list = [](const std::vector<Simplex>& v) {
    json j = json::array();
    for (const auto& s : v) j.push_back(std::vector<VertexId>(s.begin(), s.end()));
    return j;
  };
  json env = envelope(c);
  env["isomorphic"] = r.isomorphic;
  env["only_in_first"] = list(r.only_in_first);
  env["only_in_second"] = list(r.only_in_second);
  return {finish(env, c, 2), r.isomorphic ? kOk : kCheckFailed};
}

// --- budget ------------------------------------------------------------------

Output cmd_budget(const Config& c) {
  json env = envelope(c);
  StabilityBudget b;
  if (!c.in.empty()) {
    const auto p = io::read_points(single_input(c));
    const auto a = analyse(c, p);
    b = stability_budget(a);
    env["dataset"] = dataset_json(p);
    env["inputs"] = {{"upsilon0", a.upsilon0()},
                     {"mu0", a.protection.nu_tilde},
                     {"delta", a.protection.delta_global},
                     {"eps", a.sampling.epsilon},
                     {"nu_tilde", a.protection.nu_tilde}};
  } else {
    b = stability_budget(c.upsilon0, c.mu0, c.delta, c.eps, c.nu_tilde);
    env["inputs"] = {{"upsilon0", c.upsilon0}, {"mu0", c.mu0}, {"delta", c.delta}, {"eps", c.eps},
                     {"nu_tilde", c.nu_tilde}};
  }
  env["budget"] = io::budget_to_json(b);
  if (c.format == "csv") {
    return {"rho_cc,rho_point,rho_metric_protect,rho_metric,rho_generic\n" + num(b.rho_cc) + "," +
                num(b.rho_point) + "," + num(b.rho_metric_protect) + "," + num(b.rho_metric) + "," +
                num(b.rho_generic) + "\n",
            kOk};
  }
  return {finish(env, c, 2), kOk};
}

// --- wiring ------------------------------------------------------------------

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--in", c.in, "Input file (compare takes two)");
  sub->add_option("--out", c.out, "Output path; stdout when omitted");
  sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--seed", c.seed, "Seed");
  sub->add_option("--dim", c.dim, "Ambient dimension")->check(CLI::Range(1, 6));
  sub->add_option("--pj", c.pj, "P_J: 'auto' or comma-separated vertex ids");
  sub->add_option("--budget-fraction", c.fractions, "Fractions of the theorem budget")->delimiter(',');
  sub->add_option("--seeds-count", c.seeds, "Trials per budget fraction and model")->check(CLI::NonNegativeNumber);
  sub->add_flag("--force", c.force, "Continue when analysis checks fail");
  sub->add_flag("--inject-fault", c.inject_fault)->group("");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Delaunay stability toolkit", "delstab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DELSTAB_VERSION);

  auto* gen = app.add_subcommand("gen", "Generate a point set");
  auto* analyze = app.add_subcommand("analyze", "Sampling, protection and thickness audit");
  auto* stability = app.add_subcommand("stability", "Perturbation trials at budget fractions");
  auto* relax = app.add_subcommand("relax", "Relaxed Delaunay star of P_J");
  auto* metric = app.add_subcommand("metric", "Delaunay star under a pulled-back metric");
  auto* compare = app.add_subcommand("compare", "Compare two complexes around a vertex set");
  auto* budget = app.add_subcommand("budget", "Perturbation budgets");
  for (auto* sub : {gen, analyze, stability, relax, metric, compare, budget}) add_common(sub, c);

  gen->add_option("--kind", c.kind, "grid | uniform | delta-search");
  gen->add_option("--side", c.side, "Grid side length");
  gen->add_option("--n", c.n, "Point count for uniform");
  gen->add_option("--spacing", c.spacing, "Grid spacing");
  gen->add_option("--jitter", c.jitter, "Jitter as a fraction of spacing, in [0, 0.5)");
  gen->add_option("--k", c.k, "Candidates for delta-search");

  stability->add_option("--mode", c.mode, "point | metric | relax");
  stability->add_option("--model", c.models, "uniform, radial, adversarial")->delimiter(',');
  stability->add_option("--batch", c.batch, "Trial batch JSON");
  stability->add_flag("--corollary", c.corollary, "Metric mode: use the nu-only budget");
  stability->add_option("--wavelength", c.wavelength, "Metric field wavelength (default 2 eps)");

  relax->add_option("--rho", c.rho, "Relaxation parameter (overrides --budget-fraction)");

  metric->add_option("--amplitude", c.amplitude, "Field amplitude (overrides --budget-fraction)");
  metric->add_option("--wavelength", c.wavelength, "Field wavelength (default 2 eps)");

  compare->add_option("--map", c.mapping, "Vertex map JSON (array or object)");

  budget->add_option("--upsilon0", c.upsilon0);
  budget->add_option("--mu0", c.mu0);
  budget->add_option("--delta", c.delta);
  budget->add_option("--eps", c.eps);
  budget->add_option("--nu-tilde", c.nu_tilde);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << DELSTAB_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    Output result;
    if (c.command == "gen") result = cmd_gen(c, err);
    else if (c.command == "analyze") result = cmd_analyze(c);
    else if (c.command == "stability") result = cmd_stability(c, err);
    else if (c.command == "relax") result = cmd_relax(c);
    else if (c.command == "metric") result = cmd_metric(c, err);
    else if (c.command == "compare") result = cmd_compare(c);
    else result = cmd_budget(c);

    if (c.out.empty()) out << result.text;
    else io::write_text(c.out, result.text);
    return result.code;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const json::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace delstab::cli
