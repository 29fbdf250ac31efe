#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hgv/audit.hpp"
#include "hgv/distribution.hpp"
#include "hgv/protocol.hpp"

namespace hgv {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x + 0.0);
  return buf;
}

inline Json to_json(const ProtocolParams& p) {
  Json j;
  j["mode"] = to_string(p.mode);
  j["n"] = p.n;
  if (p.saturated) {
    j["k"] = nullptr;
    j["m"] = nullptr;
  } else {
    j["k"] = p.k;
    j["m"] = p.m;
  }
  j["epsilon"] = p.epsilon;
  j["delta"] = p.delta;
  j["r_values"] = p.r_values;
  j["r_max"] = p.r_max;
  if (p.mode == ParamMode::kPaperExact) {
    j["k_formula"] = static_cast<double>(p.k_formula);
    j["m_formula"] = static_cast<double>(p.m_formula);
    j["definetti_correction"] = p.definetti_correction();
  }
  if (!p.saturated) j["total_registers"] = p.total_registers();
  else j["total_registers"] = nullptr;
  j["register_budget"] = p.register_budget;
  j["runnable"] = p.runnable;
  return j;
}

inline Json to_json(const GroupResult& g) {
  return Json{{"vertex", g.vertex},
              {"r_i", g.r},
              {"K_i", g.pass_count},
              {"threshold", g.threshold},
              {"min_pass_count", g.min_pass_count},
              {"passed", g.passed}};
}

/// Run body without params; campaign files hoist params to the top level.
inline Json run_json(const ProtocolReport& r) {
  Json groups = Json::array();
  for (const auto& g : r.groups) groups.push_back(to_json(g));
  Json j;
  j["seed"] = r.seed;
  j["alice"] = {{"groups", groups}, {"accepted", r.accepted}};
  j["auditor"] = {{"compute_fidelity", r.compute_fidelity}};
  return j;
}

inline Json to_json(const ProtocolReport& r) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["seed"] = r.seed;
  j["params"] = to_json(r.params);
  const Json body = run_json(r);
  j["alice"] = body["alice"];
  j["auditor"] = body["auditor"];
  return j;
}

inline Json to_json(const AuditSummary& s) {
  Json j;
  j["trials"] = s.trials;
  j["accepted"] = s.accepted;
  j["acceptance_rate"] = s.acceptance_rate;
  j["accepted_fidelity"] = {{"count", s.accepted_fidelity.count},
                            {"min", s.accepted_fidelity.min},
                            {"mean", s.accepted_fidelity.mean},
                            {"max", s.accepted_fidelity.max},
                            {"histogram", s.accepted_fidelity.histogram}};
  j["low_fidelity_cutoff"] = s.low_fidelity_cutoff;
  j["accepted_low_fidelity"] = s.accepted_low_fidelity;
  j["joint_frequency"] = s.joint_frequency;
  j["accepted_high_fidelity_fraction"] = s.accepted_high_fidelity_fraction;
  j["completeness_bound"] = s.completeness_bound;
  j["product_form_bound"] = s.product_form_bound;
  j["product_form_estimate"] = s.product_form_estimate ? Json(*s.product_form_estimate) : Json(nullptr);
  if (s.exact) {
    j["exact"] = {{"pass_probabilities", s.exact->pass_probabilities},
                  {"fidelity", s.exact->fidelity},
                  {"acceptance_probability", s.exact->acceptance_probability},
                  {"joint_probability", s.exact->joint_probability}};
  } else {
    j["exact"] = nullptr;
  }
  return j;
}

inline Json to_json(const OutcomeDistribution& d) {
  Json probs = Json::object();
  for (std::size_t z = 0; z < d.probabilities.size(); ++z)
    probs[bitstring(z, d.n())] = d.probabilities[z];
  return Json{{"bases", bases_string(d.bases)}, {"probabilities", probs}};
}

/// One row per run: format_version,point,prover,trial,seed,accepted,compute_fidelity,K_1..K_n.
inline void write_campaign_csv_header(std::ostream& out, int n) {
  out << "format_version,point,prover,trial,seed,accepted,compute_fidelity";
  for (int i = 1; i <= n; ++i) out << ",K_" << i;
  out << '\n';
}

inline void write_campaign_csv_rows(std::ostream& out, std::size_t point, const std::string& prover,
                                    std::span<const ProtocolReport> runs) {
  for (std::size_t t = 0; t < runs.size(); ++t) {
    const ProtocolReport& r = runs[t];
    out << kFormatVersion << ',' << point << ',' << prover << ',' << t << ',' << r.seed << ','
        << (r.accepted ? 1 : 0) << ',' << format_double(r.compute_fidelity);
    for (const auto& g : r.groups) out << ',' << g.pass_count;
    out << '\n';
  }
}

}  // namespace hgv
