#include "fracwave/io.hpp"

#include <cstdio>

#include <json.hpp>

#include "fracwave/fracops.hpp"

namespace fracwave {

using nlohmann::json;

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_quote(fields[i]);
  }
  out += '\n';
  return out;
}

std::string trajectory_csv(const SolveOutcome& out, const ProblemParams& params) {
  std::string s = csv_line({"t", "w", "memory_forcing"});
  std::vector<double> wp(out.trajectory.size());
  for (std::size_t i = 0; i < wp.size(); ++i)
    wp[i] = std::pow(std::abs(out.trajectory.values[i]), params.p);
  SampledPath mem = frac_integral_left({out.trajectory.mesh, wp}, params.gamma);
  for (std::size_t i = 0; i < out.trajectory.size(); ++i)
    s += csv_line({format_float(out.trajectory.mesh->node(i)),
                   format_float(out.trajectory.values[i]), format_float(mem.values[i])});
  return s;
}

std::string phase_table_csv(const std::vector<PhaseRow>& rows) {
  std::string s = csv_line({"alpha", "gamma", "p", "scale", "prediction", "theorem_case",
                            "observed", "t_star_est", "error"});
  for (const auto& r : rows)
    s += csv_line({format_float(r.alpha), format_float(r.gamma), format_float(r.p),
                   format_float(r.scale), r.prediction, r.theorem_case, r.observed,
                   r.t_star ? format_float(*r.t_star) : "", r.error});
  return s;
}

std::string snapshot_csv(const SpectralDomain& dom, const std::vector<double>& coeffs) {
  const auto phys = dom.to_phys(coeffs);
  const int ga = dom.grid_per_axis();
  const int M = ga + 1;
  std::string s;
  if (dom.dimension() == 1) {
    s = csv_line({"x", "u"});
    for (int i = 1; i <= ga; ++i)
      s += csv_line({format_float(M_PI * i / M), format_float(phys[i - 1])});
  } else {
    s = csv_line({"x", "y", "u"});
    for (int i = 1; i <= ga; ++i)
      for (int j = 1; j <= ga; ++j)
        s += csv_line({format_float(M_PI * i / M), format_float(M_PI * j / M),
                       format_float(phys[static_cast<std::size_t>(i - 1) * ga + (j - 1)])});
  }
  return s;
}

namespace {

json params_json(const ProblemParams& p) {
  return {{"alpha", p.alpha}, {"gamma", p.gamma}, {"p", p.p}, {"a", p.a}, {"b", p.b}};
}

}  // namespace

std::string report_json(const RegimeReport& rep) {
  json j;
  j["schema"] = 1;
  j["params"] = params_json(rep.params);
  j["moments"] = {{"m0", rep.moments.m0},
                  {"m1", rep.moments.m1},
                  {"u1_identically_zero", rep.moments.u1_identically_zero}};
  j["prediction"] = to_string(rep.prediction.verdict);
  j["theorem_case"] = rep.prediction.theorem_case;
  json hyp = json::array();
  for (const auto& h : rep.prediction.hypotheses)
    hyp.push_back({{"name", h.name}, {"lhs", h.lhs}, {"rhs", h.rhs}, {"holds", h.holds}});
  j["hypotheses"] = hyp;
  j["observed"] = rep.observed;
  if (rep.t_star) j["t_star"] = *rep.t_star;
  if (rep.verified_scale) j["verified_scale"] = *rep.verified_scale;
  json fits = json::array();
  for (const auto& f : rep.rate_fits)
    fits.push_back({{"slope", f.slope}, {"half_width", f.half_width}, {"points", f.points}});
  j["rate_fits"] = fits;
  j["constants"] = {{"K1", rep.constants.K1},
                    {"K2", rep.constants.K2},
                    {"l", rep.constants.l},
                    {"normalizer", rep.constants.normalizer}};
  j["agreement"] = rep.agreement;
  return j.dump(2) + "\n";
}

std::string pde_manifest_json(const ProblemParams& params, const FieldSolveOutcome& run,
                              int modes, int dimension,
                              const std::vector<SnapshotRef>& snapshots) {
  json j;
  j["schema"] = 1;
  j["params"] = params_json(params);
  j["domain"] = {{"dimension", dimension}, {"modes", modes}};
  j["mesh"] = {{"horizon", run.mesh->horizon()},
               {"nodes", run.mesh->size()},
               {"grading", run.mesh->grading()}};
  j["outcome"] = {{"status", to_string(run.status)}};
  if (run.t_star) j["outcome"]["t_star"] = *run.t_star;
  json hist = json::array();
  for (const auto& e : run.refinement_history)
    hist.push_back({{"steps", e.steps}, {"t_cross", e.t_cross}});
  j["refinement_history"] = hist;
  json snaps = json::array();
  for (const auto& s : snapshots) snaps.push_back({{"t", s.t}, {"file", s.file}});
  j["snapshots"] = snaps;
  return j.dump(2) + "\n";
}

}  // namespace fracwave
