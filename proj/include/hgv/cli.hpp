#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hgv/audit.hpp"
#include "hgv/distribution.hpp"
#include "hgv/ensemble.hpp"
#include "hgv/hypergraph.hpp"
#include "hgv/oracle.hpp"
#include "hgv/protocol.hpp"
#include "hgv/report.hpp"
#include "hgv/stabilizer.hpp"
#include "hgv/statevector.hpp"

namespace hgv::cli {

/// Options shared by every subcommand.
struct CommonConfig {
  std::string graph_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;  // empty: standard output
  std::string format;
};

inline Hypergraph load_hypergraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read hypergraph file '" + path + "'");
  try {
    return parse_hypergraph(in);
  } catch (const ParseError& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

/// "honest" | "zero" | "plus" | "noisy:P"
inline StateRecipe parse_recipe(const std::string& text) {
  if (text == "honest") return StateRecipe::hypergraph();
  if (text == "zero") return StateRecipe::zero();
  if (text == "plus") return StateRecipe::plus();
  if (text.rfind("noisy:", 0) == 0) {
    std::size_t used = 0;
    const std::string num = text.substr(6);
    double p = 0.0;
    try {
      p = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != num.size() || !(p >= 0.0 && p <= 1.0))
      throw InvalidArgument("bad noise probability in '" + text + "'");
    return StateRecipe::hypergraph(p);
  }
  throw InvalidArgument("unknown prover '" + text + "' (expected honest, zero, plus or noisy:P)");
}

inline ProverStrategy parse_strategy(const std::string& text) {
  const StateRecipe r = parse_recipe(text);
  if (text == "honest") return Honest{};
  if (r.kind == StateRecipe::Kind::kHypergraph) return IIDNoisy{r.noise};
  return FixedState{r};
}

/// Script file: one `RECIPE [COUNT]` per line, '#' comments.
inline Scripted load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read script file '" + path + "'");
  Scripted script;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name) || name.front() == '#') continue;
    long long count = 1;
    if (!(ls >> count)) count = 1;
    if (count < 1) throw InvalidArgument(path + ":" + std::to_string(line_no) + ": count must be positive");
    const StateRecipe r = parse_recipe(name);
    for (long long c = 0; c < count; ++c) script.recipes.push_back(r);
  }
  return script;
}

inline std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double p = std::stod(item, &used);
    if (used != item.size() || !(p >= 0.0 && p <= 1.0))
      throw InvalidArgument("noise grid entries must be probabilities, got '" + item + "'");
    grid.push_back(p);
  }
  if (grid.empty()) throw InvalidArgument("empty noise grid");
  return grid;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw InvalidArgument("cannot write '" + path + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

inline Json config_json(const CommonConfig& c, const Hypergraph& g) {
  return Json{{"graph_path", c.graph_path}, {"graph", serialize(g)}, {"format", c.format}};
}

// ---------------------------------------------------------------------------

inline int cmd_state(const CommonConfig& c, std::ostream& out) {
  const Hypergraph g = load_hypergraph(c.graph_path);
  const StateVector s = build_hypergraph_state(g);
  Output o(c.out_path, out);
  if (c.format == "json") {
    Json amps = Json::array();
    for (std::size_t b = 0; b < s.dim(); ++b) amps.push_back({s[b].real(), s[b].imag()});
    Json j{{"format_version", kFormatVersion}, {"command", "state"}, {"config", config_json(c, g)},
           {"n", s.n()}, {"amplitudes", amps}};
    o.stream() << j.dump(2) << '\n';
  } else {
    dump_state(s, o.stream());
  }
  return 0;
}

struct TestConfig {
  int vertex = 0;
  std::uint64_t trials = 10000;
  std::string prover = "honest";
};

inline int cmd_test(const CommonConfig& c, const TestConfig& t, std::uint64_t seed, std::ostream& out) {
  const Hypergraph g = load_hypergraph(c.graph_path);
  if (t.vertex != 0) check_vertex(g, t.vertex);
  const StateRecipe recipe = parse_recipe(t.prover);
  const Ensemble rho = recipe_ensemble(recipe, g);

  Json vertices = Json::array();
  std::ostringstream csv;
  csv << "format_version,vertex,r,pass_probability,trials,passes,rate,sigma,z_score\n";
  for (Vertex i = 1; i <= g.n(); ++i) {
    if (t.vertex != 0 && i != t.vertex) continue;
    const int r = neighborhood(g, i).r();
    const double exact = pass_probability(rho, g, i);
    std::uint64_t passes = 0;
    for (std::uint64_t k = 0; k < t.trials; ++k) {
      Rng prep = Rng::stream(seed, "test-prover-" + std::to_string(i), k);
      Rng meas = Rng::stream(seed, "test-measure-" + std::to_string(i), k);
      if (run_stabilizer_test(prepare(recipe, g, prep), g, i, meas).passed) ++passes;
    }
    const double rate = static_cast<double>(passes) / static_cast<double>(t.trials);
    const double sigma = binomial_sigma(exact, t.trials);
    const double z = sigma > 0 ? (rate - exact) / sigma : 0.0;
    vertices.push_back({{"vertex", i}, {"r", r}, {"pass_probability", exact}, {"trials", t.trials},
                        {"passes", passes}, {"rate", rate}, {"sigma", sigma}, {"z_score", z}});
    csv << kFormatVersion << ',' << i << ',' << r << ',' << format_double(exact) << ',' << t.trials
        << ',' << passes << ',' << format_double(rate) << ',' << format_double(sigma) << ','
        << format_double(z) << '\n';
  }

  Output o(c.out_path, out);
  if (c.format == "csv") {
    o.stream() << csv.str();
  } else {
    Json cfg = config_json(c, g);
    cfg["vertex"] = t.vertex;
    cfg["trials"] = t.trials;
    cfg["prover"] = t.prover;
    Json j{{"format_version", kFormatVersion}, {"command", "test"}, {"seed", seed},
           {"config", cfg}, {"vertices", vertices}};
    o.stream() << j.dump(2) << '\n';
  }
  return 0;
}

struct VerifyConfig {
  std::int64_t k = 0;
  std::int64_t m = 0;
  double epsilon = 0.0;
  std::optional<double> delta;
  std::uint64_t trials = 100;
  std::string prover = "honest";
  std::string script_path;
  std::string noise_grid;
  unsigned threads = 1;
  std::uint64_t budget = kDefaultRegisterBudget;
};

inline int cmd_verify(const CommonConfig& c, const VerifyConfig& v, std::uint64_t seed, std::ostream& out) {
  const Hypergraph g = load_hypergraph(c.graph_path);
  const ProtocolParams params =
      compute_params(g, ParamMode::kScaled, {v.k, v.m, v.epsilon, v.delta}, v.budget);
  if (!params.runnable)
    throw BudgetExceeded("configuration needs " + std::to_string(params.total_registers()) +
                         " registers, budget is " + std::to_string(v.budget));

  struct Point {
    std::string label;
    std::optional<double> noise;
    ProverStrategy strategy;
  };
  std::vector<Point> points;
  if (!v.noise_grid.empty()) {
    for (double p : parse_grid(v.noise_grid)) points.push_back({"noisy:" + format_double(p), p, IIDNoisy{p}});
  } else if (!v.script_path.empty()) {
    points.push_back({"scripted:" + v.script_path, std::nullopt, load_script(v.script_path)});
  } else {
    points.push_back({v.prover, std::nullopt, parse_strategy(v.prover)});
  }

  Output o(c.out_path, out);
  if (c.format == "csv") write_campaign_csv_header(o.stream(), g.n());
  Json jpoints = Json::array();
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const Point& pt = points[pi];
    // Each grid point gets its own stream family so points are independent.
    const std::uint64_t point_seed = derive_seed(seed, "verify-point", pi);
    const auto runs = run_campaign(g, pt.strategy, params, v.trials, point_seed, v.threads);
    if (c.format == "csv") {
      write_campaign_csv_rows(o.stream(), pi, pt.label, runs);
      continue;
    }
    Json jruns = Json::array();
    for (std::size_t t = 0; t < runs.size(); ++t) {
      Json r = run_json(runs[t]);
      jruns.push_back(Json{{"trial", t}, {"seed", r["seed"]}, {"alice", r["alice"]}, {"auditor", r["auditor"]}});
    }
    jpoints.push_back(Json{{"prover", pt.label},
                           {"noise", pt.noise ? Json(*pt.noise) : Json(nullptr)},
                           {"point_seed", point_seed},
                           {"summary", to_json(soundness_audit(g, pt.strategy, runs))},
                           {"runs", jruns}});
  }
  if (c.format != "csv") {
    Json cfg = config_json(c, g);
    cfg["k"] = v.k;
    cfg["m"] = v.m;
    cfg["epsilon"] = v.epsilon;
    cfg["delta"] = v.delta ? Json(*v.delta) : Json(nullptr);
    cfg["trials"] = v.trials;
    cfg["prover"] = v.prover;
    cfg["script"] = v.script_path;
    cfg["noise_grid"] = v.noise_grid;
    cfg["threads"] = v.threads;
    cfg["budget"] = v.budget;
    Json j{{"format_version", kFormatVersion}, {"command", "verify"}, {"seed", seed},
           {"config", cfg}, {"params", to_json(params)}, {"points", jpoints}};
    o.stream() << j.dump(2) << '\n';
  }
  return 0;
}

struct ParamsConfig {
  bool paper_exact = false;
  std::optional<std::int64_t> k;
  std::optional<std::int64_t> m;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::uint64_t budget = kDefaultRegisterBudget;
};

inline int cmd_params(const CommonConfig& c, const ParamsConfig& pc, std::ostream& out) {
  const Hypergraph g = load_hypergraph(c.graph_path);
  const ProtocolParams p =
      pc.paper_exact ? compute_params(g, ParamMode::kPaperExact, {}, pc.budget)
                     : compute_params(g, ParamMode::kScaled, {pc.k, pc.m, pc.epsilon, pc.delta}, pc.budget);
  Output o(c.out_path, out);
  if (c.format == "json") {
    Json j{{"format_version", kFormatVersion}, {"command", "params"}, {"config", config_json(c, g)},
           {"params", to_json(p)}};
    o.stream() << j.dump(2) << '\n';
    return 0;
  }
  std::ostream& s = o.stream();
  auto integer = [&](std::uint64_t v, long double formula) {
    if (!p.saturated) return std::to_string(v);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6Le (overflows 64 bits)", formula);
    return std::string(buf);
  };
  s << "mode: " << to_string(p.mode) << '\n';
  s << "n: " << p.n << '\n';
  s << "r_max: " << p.r_max << '\n';
  s << "r_values:";
  for (int r : p.r_values) s << ' ' << r;
  s << '\n';
  s << "k: " << integer(p.k, p.k_formula) << '\n';
  s << "m: " << integer(p.m, p.m_formula) << '\n';
  s << "epsilon: " << format_double(p.epsilon) << '\n';
  s << "delta: " << format_double(p.delta) << '\n';
  if (p.mode == ParamMode::kPaperExact) {
    s << "definetti_correction: " << format_double(p.definetti_correction()) << '\n';
    s << "soundness_bound: " << format_double(1.0 / (2.0 * p.n * p.n) + p.definetti_correction()) << '\n';
  }
  s << "total_registers: " << (p.saturated ? std::string("overflow") : std::to_string(p.total_registers())) << '\n';
  s << "register_budget: " << p.register_budget << '\n';
  s << "runnable: " << (p.runnable ? "yes" : "no (exceeds register budget)") << '\n';
  return 0;
}

inline int cmd_oracle(const CommonConfig& c, std::ostream& out) {
  const Hypergraph g = load_hypergraph(c.graph_path);
  const oracle::OracleReport report = oracle::oracle_checks(g);
  Output o(c.out_path, out);
  if (c.format == "json") {
    Json checks = Json::array();
    for (const auto& ch : report.checks)
      checks.push_back({{"name", ch.name}, {"passed", ch.passed}, {"max_deviation", ch.max_deviation},
                        {"detail", ch.detail}});
    Json j{{"format_version", kFormatVersion}, {"command", "oracle"}, {"config", config_json(c, g)},
           {"checks", checks}, {"passed", report.all_passed()}};
    o.stream() << j.dump(2) << '\n';
  } else {
    for (const auto& ch : report.checks) {
      o.stream() << (ch.passed ? "PASS " : "FAIL ") << ch.name << " (max deviation "
                 << format_double(ch.max_deviation) << ")";
      if (!ch.passed) o.stream() << ": " << ch.detail;
      o.stream() << '\n';
    }
  }
  return report.all_passed() ? 0 : 1;
}

struct DistanceConfig {
  std::string bases;
  double noise = 0.001;
  std::uint64_t shots = 0;
};

inline int cmd_sample_distance(const CommonConfig& c, const DistanceConfig& d, std::uint64_t seed,
                               std::ostream& out) {
  const Hypergraph g = load_hypergraph(c.graph_path);
  const std::vector<Basis> bases = parse_bases(d.bases.empty() ? std::string(g.n(), 'X') : d.bases);
  const StateVector ideal_state = build_hypergraph_state(g);
  const Ensemble surrogate = pauli_noise_ensemble(ideal_state, d.noise);
  const double fid = fidelity_with(surrogate, g);

  const OutcomeDistribution p = exact_distribution(ideal_state, bases);
  const OutcomeDistribution p_prime = exact_distribution(surrogate, bases);
  const double d_ideal = l1_distance(p, p_prime);
  const double bound = 2.0 * std::sqrt(std::max(0.0, 1.0 - fid));

  struct Sampler {
    std::string name;
    OutcomeDistribution q;
  };
  const std::vector<Sampler> samplers{{"uniform", uniform_distribution(bases)},
                                      {"product_of_marginals", product_of_marginals(p_prime)}};

  Output o(c.out_path, out);
  if (c.format == "csv") {
    o.stream() << "format_version,bitstring,p_ideal,p_surrogate,q_uniform,q_product_of_marginals\n";
    for (std::size_t z = 0; z < p.probabilities.size(); ++z)
      o.stream() << kFormatVersion << ',' << bitstring(z, g.n()) << ',' << format_double(p.probabilities[z])
                 << ',' << format_double(p_prime.probabilities[z]) << ','
                 << format_double(samplers[0].q.probabilities[z]) << ','
                 << format_double(samplers[1].q.probabilities[z]) << '\n';
    return 0;
  }

  Json jsamplers = Json::array();
  for (const auto& s : samplers) {
    const double to_surrogate = l1_distance(p_prime, s.q);
    const double to_ideal = l1_distance(p, s.q);
    jsamplers.push_back({{"name", s.name},
                         {"l1_to_surrogate", to_surrogate},
                         {"l1_to_ideal", to_ideal},
                         {"triangle_bound", d_ideal + to_surrogate},
                         {"triangle_holds", to_ideal <= d_ideal + to_surrogate + 1e-12}});
  }
  Json cfg = config_json(c, g);
  cfg["bases"] = bases_string(bases);
  cfg["noise"] = d.noise;
  cfg["shots"] = d.shots;
  Json j{{"format_version", kFormatVersion}, {"command", "sample-distance"}, {"seed", seed},
         {"config", cfg}, {"surrogate_fidelity", fid}, {"l1_ideal_surrogate", d_ideal},
         {"trace_distance_bound", bound}, {"within_bound", d_ideal <= bound + 1e-12},
         {"supremacy_threshold", 1.0 / 192.0}, {"samplers", jsamplers},
         {"ideal", to_json(p)}, {"surrogate", to_json(p_prime)}};
  if (d.shots > 0) {
    std::vector<double> counts(p_prime.probabilities.size(), 0.0);
    for (std::uint64_t s = 0; s < d.shots; ++s) {
      Rng noise_rng = Rng::stream(seed, "distance-noise", s);
      Rng shot_rng = Rng::stream(seed, "distance-shot", s);
      StateVector st = ideal_state;
      apply_pauli_noise(st, d.noise, noise_rng);
      counts[sample_outcome(std::move(st), bases, shot_rng)] += 1.0;
    }
    OutcomeDistribution empirical{bases, counts};
    for (double& x : empirical.probabilities) x /= static_cast<double>(d.shots);
    j["empirical"] = {{"shots", d.shots}, {"l1_to_surrogate", l1_distance(empirical, p_prime)}};
  }
  o.stream() << j.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

/// Entry point behind the hgverify binary. Returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Hypergraph-state verification simulator", "hgverify"};
  app.require_subcommand(1);

  CommonConfig common;
  std::map<const CLI::App*, std::string> formats;  // node-based: references stay valid
  auto add_common = [&](CLI::App* sub, const std::string& default_format,
                        std::vector<std::string> allowed) {
    sub->add_option("--graph", common.graph_path, "hypergraph file")->required();
    sub->add_option("--out", common.out_path, "output file (default: stdout)");
    std::string& fmt = formats[sub];
    fmt = default_format;
    sub->add_option("--format", fmt, "output format")->check(CLI::IsMember(allowed));
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "master seed (default: drawn from entropy and recorded)");
  };

  auto* state = app.add_subcommand("state", "print the hypergraph state amplitudes");
  add_common(state, "dump", {"dump", "json"});

  TestConfig test_cfg;
  auto* test = app.add_subcommand("test", "run single stabilizer tests against the closed form");
  add_common(test, "json", {"json", "csv"});
  add_seed(test);
  test->add_option("--vertex", test_cfg.vertex, "vertex to test (0: all)");
  test->add_option("--trials", test_cfg.trials, "tests per vertex")->check(CLI::PositiveNumber);
  test->add_option("--prover", test_cfg.prover, "register state: honest, zero, plus, noisy:P");

  VerifyConfig verify_cfg;
  auto* verify = app.add_subcommand("verify", "run a protocol campaign with scaled parameters");
  add_common(verify, "json", {"json", "csv"});
  add_seed(verify);
  verify->add_option("--k", verify_cfg.k, "registers per group")->required();
  verify->add_option("--m", verify_cfg.m, "discarded registers")->required();
  verify->add_option("--epsilon", verify_cfg.epsilon, "threshold slack")->required();
  verify->add_option("--delta", verify_cfg.delta, "soundness reference constant");
  verify->add_option("--trials", verify_cfg.trials, "protocol runs")->check(CLI::PositiveNumber);
  auto* prover_opt = verify->add_option("--prover", verify_cfg.prover, "honest, zero, plus, noisy:P");
  auto* script_opt = verify->add_option("--script", verify_cfg.script_path, "per-register recipe file");
  auto* grid_opt = verify->add_option("--noise-grid", verify_cfg.noise_grid, "comma-separated noise levels");
  prover_opt->excludes(script_opt)->excludes(grid_opt);
  script_opt->excludes(grid_opt);
  verify->add_option("--threads", verify_cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--budget", verify_cfg.budget, "register budget");

  ParamsConfig params_cfg;
  auto* params = app.add_subcommand("params", "display protocol parameters");
  add_common(params, "text", {"text", "json"});
  auto* exact_flag = params->add_flag("--paper-exact", params_cfg.paper_exact, "use the asymptotic formulas");
  params->add_option("--k", params_cfg.k)->excludes(exact_flag);
  params->add_option("--m", params_cfg.m)->excludes(exact_flag);
  params->add_option("--epsilon", params_cfg.epsilon)->excludes(exact_flag);
  params->add_option("--delta", params_cfg.delta)->excludes(exact_flag);
  params->add_option("--budget", params_cfg.budget, "register budget");

  auto* oracle_cmd = app.add_subcommand("oracle", "check stabilizer identities with dense matrices");
  add_common(oracle_cmd, "text", {"text", "json"});

  DistanceConfig dist_cfg;
  auto* distance = app.add_subcommand("sample-distance", "L1 distance between ideal and noisy outcome distributions");
  add_common(distance, "json", {"json", "csv"});
  add_seed(distance);
  distance->add_option("--bases", dist_cfg.bases, "per-qubit bases, e.g. XXZ (default: all X)");
  distance->add_option("--noise", dist_cfg.noise, "per-qubit noise of the surrogate")->check(CLI::Range(0.0, 1.0));
  distance->add_option("--shots", dist_cfg.shots, "optional sampled shots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    for (const auto& [sub, fmt] : formats)
      if (sub->parsed()) common.format = fmt;
    const std::uint64_t seed = common.seed ? *common.seed : entropy_seed();
    if (state->parsed()) return cmd_state(common, out);
    if (test->parsed()) return cmd_test(common, test_cfg, seed, out);
    if (verify->parsed()) return cmd_verify(common, verify_cfg, seed, out);
    if (params->parsed()) return cmd_params(common, params_cfg, out);
    if (oracle_cmd->parsed()) return cmd_oracle(common, out);
    if (distance->parsed()) return cmd_sample_distance(common, dist_cfg, seed, out);
  } catch (const std::exception& e) {
    err << "hgverify: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace hgv::cli
