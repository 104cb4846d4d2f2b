#include "delstab/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace delstab::io {

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json simplex_json(const Simplex& s) { return json(std::vector<VertexId>(s.begin(), s.end())); }

json point_json(const Point& p) { return json(std::vector<double>(p.data(), p.data() + p.size())); }

json check_json(const CheckCount& c) {
  json j{{"pass", c.pass}, {"fail", c.fail}};
  j["min_margin"] = std::isfinite(c.min_margin) ? json(c.min_margin) : json(nullptr);
  return j;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

PointSet read_points(std::istream& in) {
  std::vector<Point> pts;
  std::string line;
  std::vector<double> coords;
  int lineno = 0;
  Eigen::Index dim = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    coords.clear();
    const char* p = line.data();
    const char* end = p + line.size();
    while (true) {
      while (p < end && std::isspace(static_cast<unsigned char>(*p))) ++p;
      if (p == end) break;
      double x = 0.0;
      auto [next, ec] = std::from_chars(p, end, x);
      if (ec != std::errc() || (next < end && !std::isspace(static_cast<unsigned char>(*next))))
        throw ParseError("line " + std::to_string(lineno) + ": bad coordinate");
      if (!std::isfinite(x)) throw ParseError("line " + std::to_string(lineno) + ": non-finite coordinate");
      coords.push_back(x);
      p = next;
    }
    if (coords.empty()) continue;
    if (dim < 0) dim = static_cast<Eigen::Index>(coords.size());
    if (static_cast<Eigen::Index>(coords.size()) != dim)
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                       " coordinates, got " + std::to_string(coords.size()));
    pts.push_back(Eigen::Map<const Point>(coords.data(), dim));
  }
  if (in.bad()) throw IoError("read failure");
  if (pts.empty()) throw ParseError("no points");
  return PointSet(std::move(pts));
}

PointSet read_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_points(in);
}

std::string format_points(const PointSet& points) {
  std::string out;
  for (const auto& p : points) {
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      if (k) out += ' ';
      out += format_double(p(k));
    }
    out += '\n';
  }
  return out;
}

void write_points(const std::filesystem::path& path, const PointSet& points) {
  write_text(path, format_points(points));
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw Error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string dataset_digest(const PointSet& points) { return sha256_hex(format_points(points)); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

json complex_to_json(const SimplicialComplex& complex, const std::vector<DelaunayBall>& balls) {
  json j;
  j["simplices"] = json::array();
  for (const auto& s : complex) j["simplices"].push_back(simplex_json(s));
  j["balls"] = json::array();
  for (const auto& b : balls)
    j["balls"].push_back({{"simplex", simplex_json(b.simplex)},
                          {"centre", point_json(b.centre)},
                          {"radius", b.radius},
                          {"protection", b.protection}});
  return j;
}

SimplicialComplex complex_from_json(const json& j) {
  const json* list = &j;
  if (j.is_object()) {
    if (!j.contains("simplices")) throw ParseError("complex object has no 'simplices'");
    list = &j.at("simplices");
  }
  if (!list->is_array()) throw ParseError("simplices must be an array");
  std::vector<Simplex> gens;
  for (const auto& s : *list) {
    if (!s.is_array() || s.empty()) throw ParseError("each simplex must be a non-empty id array");
    std::vector<VertexId> ids;
    for (const auto& v : s) {
      if (!v.is_number_unsigned()) throw ParseError("vertex ids must be non-negative integers");
      ids.push_back(v.get<VertexId>());
    }
    try {
      gens.emplace_back(std::move(ids));
    } catch (const PreconditionError& e) {
      throw ParseError(e.what());
    }
  }
  return SimplicialComplex::closure(gens);
}

json sampling_to_json(const SamplingReport& s) {
  return {{"epsilon", s.epsilon}, {"sparsity", s.sparsity}, {"mu0", s.mu0}};
}

json audit_to_json(const LemmaAudit& audit) {
  json j = sampling_to_json(audit.sampling);
  j["generic"] = audit.generic;
  j["delta"] = audit.delta;
  j["nu_tilde"] = audit.nu_tilde;
  j["upsilon0"] = audit.upsilon0;
  j["simplices"] = json::array();
  for (const auto& s : audit.simplices)
    j["simplices"].push_back({{"vertices", simplex_json(s.simplex)},
                              {"radius", s.radius},
                              {"protection", finite_or_null(s.protection)},
                              {"thickness", s.thickness},
                              {"secure", s.secure}});
  j["checks"] = {{"separation", check_json(audit.separation)},
                 {"altitude", check_json(audit.altitude)},
                 {"circumradius", check_json(audit.circumradius)},
                 {"thickness", check_json(audit.thickness)}};
  return j;
}

json certificate_to_json(const ThicknessCertificate& cert) {
  json w = json::array();
  for (const auto& x : cert.witnesses)
    w.push_back({{"simplex", simplex_json(x.simplex)}, {"thickness", x.thickness}, {"passes", x.passes}});
  return {{"upsilon0", cert.upsilon0}, {"nu_tilde", cert.nu_tilde}, {"min_thickness", cert.min_thickness},
          {"margin", cert.margin},     {"valid", cert.valid},       {"witnesses", w}};
}

json budget_to_json(const StabilityBudget& b) {
  return {{"rho_cc", b.rho_cc},
          {"rho_point", b.rho_point},
          {"rho_metric_protect", b.rho_metric_protect},
          {"rho_metric", b.rho_metric},
          {"rho_generic", b.rho_generic}};
}

json verdict_to_json(const TrialVerdict& v) {
  json measured = json::object();
  for (const auto& [k, x] : v.measured) measured[k] = finite_or_null(x);
  json ce = json::array();
  for (const auto& s : v.counterexamples) ce.push_back(simplex_json(s));
  return {{"kind", v.kind},
          {"passed", v.passed},
          {"in_budget", v.in_budget},
          {"certified", v.certified},
          {"rho", v.budget_used},
          {"measured", measured},
          {"counterexamples", ce}};
}

TrialBatch parse_trial_batch(const json& j) {
  if (!j.is_object()) throw ParseError("trial batch must be an object");
  TrialBatch b;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "dataset") {
        b.dataset = value.get<std::string>();
      } else if (key == "P_J") {
        if (value.is_string()) {
          if (value.get<std::string>() != "auto") throw ParseError("P_J must be \"auto\" or an id array");
        } else {
          b.pj = value.get<std::vector<VertexId>>();
        }
      } else if (key == "budgets") {
        b.budgets = value.get<std::vector<double>>();
      } else if (key == "seeds") {
        b.seeds = value.get<int>();
      } else if (key == "models") {
        b.models.clear();
        for (const auto& m : value) b.models.push_back(parse_perturbation_model(m.get<std::string>()));
      } else {
        throw ParseError("unknown key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError("bad value for '" + key + "': " + e.what());
    } catch (const PreconditionError& e) {
      throw ParseError(e.what());
    }
  }
  if (b.seeds < 0) throw ParseError("seeds must be non-negative");
  for (double f : b.budgets)
    if (!(f >= 0.0) || !std::isfinite(f)) throw ParseError("budget fractions must be finite and >= 0");
  return b;
}

std::vector<VertexId> parse_id_list(const std::string& text) {
  std::vector<VertexId> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const std::string tok = text.substr(pos, comma - pos);
    VertexId v = 0;
    auto [next, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || next != tok.data() + tok.size())
      throw ParseError("bad vertex id '" + tok + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace delstab::io
