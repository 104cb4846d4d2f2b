#pragma once

// Point files, JSON encodings of complexes/audits/verdicts, and content digests.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "delstab/delaunay.hpp"
#include "delstab/genericity.hpp"
#include "delstab/perturb.hpp"

namespace delstab::io {

using nlohmann::json;

/// One point per line, whitespace-separated; '#' starts a comment. The first
/// data line fixes the dimension. Throws ParseError with a line number.
PointSet read_points(std::istream& in);
PointSet read_points(const std::filesystem::path& path);

/// Canonical text: 17 significant digits, single spaces, '\n' line ends.
std::string format_points(const PointSet& points);
void write_points(const std::filesystem::path& path, const PointSet& points);

std::string sha256_hex(std::string_view bytes);
/// Digest of the canonical text, so formatting differences in the input do not matter.
std::string dataset_digest(const PointSet& points);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// {"simplices": [[ids]...], "balls": [{simplex, centre, radius, protection}...]}
json complex_to_json(const SimplicialComplex& complex, const std::vector<DelaunayBall>& balls = {});
/// Accepts the object above or a bare array of vertex-id arrays; returns the closure.
SimplicialComplex complex_from_json(const json& j);

json sampling_to_json(const SamplingReport& s);
json audit_to_json(const LemmaAudit& audit);
json certificate_to_json(const ThicknessCertificate& cert);
json budget_to_json(const StabilityBudget& b);
json verdict_to_json(const TrialVerdict& v);

/// Trial batch description; unknown keys are rejected.
struct TrialBatch {
  std::string dataset;
  std::vector<VertexId> pj;  // empty means all deep interior points
  std::vector<double> budgets{1.0};
  int seeds = 1;
  std::vector<PerturbationModel> models{PerturbationModel::uniform};
};

TrialBatch parse_trial_batch(const json& j);

/// Comma-separated non-negative integers.
std::vector<VertexId> parse_id_list(const std::string& text);

}  // namespace delstab::io
