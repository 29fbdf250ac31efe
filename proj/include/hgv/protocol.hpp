#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hgv/ensemble.hpp"
#include "hgv/errors.hpp"
#include "hgv/hypergraph.hpp"
#include "hgv/rng.hpp"
#include "hgv/stabilizer.hpp"
#include "hgv/statevector.hpp"

namespace hgv {

enum class ParamMode { kPaperExact, kScaled };

inline const char* to_string(ParamMode m) {
  return m == ParamMode::kPaperExact ? "paper_exact" : "scaled";
}

/// Explicit protocol sizes for scaled runs. delta defaults to min(2*epsilon, 1).
struct ScaledOverrides {
  std::optional<std::int64_t> k;
  std::optional<std::int64_t> m;
  std::optional<double> epsilon;
  std::optional<double> delta;
};

struct ProtocolParams {
  int n = 0;
  std::uint64_t k = 0;  // registers per group
  std::uint64_t m = 0;  // discarded registers
  double epsilon = 0.0;
  double delta = 0.0;  // soundness reference constant
  std::vector<int> r_values;
  int r_max = 0;
  ParamMode mode = ParamMode::kScaled;

  // Real-valued k and m before rounding; meaningful when k or m overflow.
  long double k_formula = 0;
  long double m_formula = 0;
  bool saturated = false;
  std::uint64_t register_budget = 0;
  bool runnable = false;

  /// nk + 1 + m, saturating.
  std::uint64_t total_registers() const {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    if (saturated || (n > 0 && k > (kMax - 1) / static_cast<std::uint64_t>(n))) return kMax;
    const std::uint64_t tested = static_cast<std::uint64_t>(n) * k + 1;
    return m > kMax - tested ? kMax : tested + m;
  }

  /// 1/2 sqrt(2 n^3 k^2 ln2 / m); infinite when m = 0.
  double definetti_correction() const {
    const long double kk = saturated ? k_formula : static_cast<long double>(k);
    const long double mm = saturated ? m_formula : static_cast<long double>(m);
    if (mm <= 0) return std::numeric_limits<double>::infinity();
    const long double n3 = static_cast<long double>(n) * n * n;
    return static_cast<double>(0.5L * std::sqrt(2.0L * n3 * kk * kk * std::numbers::ln2_v<long double> / mm));
  }
};

inline constexpr std::uint64_t kDefaultRegisterBudget = 10'000'000;

namespace detail {

inline std::uint64_t saturate(long double x, bool& saturated) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (!(x < static_cast<long double>(kMax))) {
    saturated = true;
    return kMax;
  }
  return static_cast<std::uint64_t>(x);
}

}  // namespace detail

/// paper_exact: k = 2^{2 r_max + 3} n^7, m = ceil(2 n^7 k^2 ln 2), epsilon =
/// 1/(2n^3), delta = 1/n^3. scaled: k, m, epsilon taken from overrides.
inline ProtocolParams compute_params(const Hypergraph& g, ParamMode mode,
                                     const ScaledOverrides& overrides = {},
                                     std::uint64_t register_budget = kDefaultRegisterBudget,
                                     SimulationLimits limits = {}) {
  ProtocolParams p;
  p.n = g.n();
  p.mode = mode;
  p.register_budget = register_budget;
  for (Vertex i = 1; i <= g.n(); ++i) p.r_values.push_back(neighborhood(g, i).r());
  p.r_max = *std::max_element(p.r_values.begin(), p.r_values.end());

  if (mode == ParamMode::kPaperExact) {
    const long double n = g.n();
    const long double n7 = std::pow(n, 7.0L);
    p.k_formula = std::ldexp(1.0L, 2 * p.r_max + 3) * n7;
    p.m_formula = std::ceil(2.0L * n7 * p.k_formula * p.k_formula * std::numbers::ln2_v<long double>);
    p.k = detail::saturate(p.k_formula, p.saturated);
    p.m = detail::saturate(p.m_formula, p.saturated);
    p.epsilon = 1.0 / (2.0 * std::pow(static_cast<double>(g.n()), 3));
    p.delta = 1.0 / std::pow(static_cast<double>(g.n()), 3);
  } else {
    if (!overrides.k || !overrides.m || !overrides.epsilon)
      throw InvalidArgument("scaled mode requires explicit k, m and epsilon");
    if (*overrides.k < 1) throw InvalidArgument("k must be at least 1");
    if (*overrides.m < 0) throw InvalidArgument("m must be non-negative");
    if (!(*overrides.epsilon > 0.0 && *overrides.epsilon < 1.0))
      throw InvalidArgument("epsilon must lie in (0, 1)");
    p.k = static_cast<std::uint64_t>(*overrides.k);
    p.m = static_cast<std::uint64_t>(*overrides.m);
    p.epsilon = *overrides.epsilon;
    p.delta = overrides.delta.value_or(std::min(2.0 * p.epsilon, 1.0));
    if (!(p.delta > p.epsilon && p.delta <= 1.0))
      throw InvalidArgument("delta must lie in (epsilon, 1]");
    p.k_formula = static_cast<long double>(p.k);
    p.m_formula = static_cast<long double>(p.m);
  }
  p.runnable = !p.saturated && p.total_registers() <= register_budget && p.n <= limits.max_qubits;
  return p;
}

/// k (1/2 + (1 - epsilon) / 2^{r+1}).
inline long double group_threshold(const ProtocolParams& p, int r) {
  return static_cast<long double>(p.k) *
         (0.5L + (1.0L - static_cast<long double>(p.epsilon)) / std::ldexp(1.0L, r + 1));
}

/// Absolute slack when comparing an integer count with a real threshold;
/// absorbs rounding in k (1/2 + (1-epsilon)/2^{r+1}).
inline constexpr long double kThresholdSlack = 1e-9L;

/// Smallest K_i that meets the (non-strict) threshold.
inline std::uint64_t min_pass_count(const ProtocolParams& p, int r) {
  const long double t = group_threshold(p, r) - kThresholdSlack;
  return t <= 0 ? 0 : static_cast<std::uint64_t>(std::ceil(t));
}

// ---------------------------------------------------------------------------
// Prover strategies

/// How Bob prepares one register.
struct StateRecipe {
  enum class Kind { kHypergraph, kZero, kPlus, kExplicit };

  Kind kind = Kind::kHypergraph;
  double noise = 0.0;  // per-qubit Pauli noise applied after preparation
  std::optional<StateVector> state;

  static StateRecipe hypergraph(double noise = 0.0) { return {Kind::kHypergraph, noise, {}}; }
  static StateRecipe zero() { return {Kind::kZero, 0.0, {}}; }
  static StateRecipe plus() { return {Kind::kPlus, 0.0, {}}; }
  static StateRecipe explicit_state(StateVector s, double noise = 0.0) {
    return {Kind::kExplicit, noise, std::move(s)};
  }
};

inline StateVector prepare(const StateRecipe& recipe, const Hypergraph& g, Rng& rng) {
  StateVector s;
  switch (recipe.kind) {
    case StateRecipe::Kind::kHypergraph: s = build_hypergraph_state(g); break;
    case StateRecipe::Kind::kZero: s = StateVector(g.n()); break;
    case StateRecipe::Kind::kPlus: s = StateVector::plus(g.n()); break;
    case StateRecipe::Kind::kExplicit:
      if (!recipe.state) throw InvalidArgument("explicit recipe without a state");
      s = *recipe.state;
      break;
  }
  if (s.n() != g.n())
    throw DimensionMismatch("prover produced a " + std::to_string(s.n()) +
                            "-qubit register, expected " + std::to_string(g.n()));
  if (recipe.noise > 0.0) apply_pauli_noise(s, recipe.noise, rng);
  return s;
}

/// Exact mixture produced by prepare().
inline Ensemble recipe_ensemble(const StateRecipe& recipe, const Hypergraph& g) {
  Rng unused(0);
  StateRecipe clean = recipe;
  clean.noise = 0.0;
  StateVector s = prepare(clean, g, unused);
  return recipe.noise > 0.0 ? pauli_noise_ensemble(s, recipe.noise) : pure_ensemble(std::move(s));
}

struct Honest {};
struct IIDNoisy {
  double per_qubit_prob = 0.0;
};
struct FixedState {
  StateRecipe recipe;
};
/// One recipe per register in Bob's sending order; need not be i.i.d.
struct Scripted {
  std::vector<StateRecipe> recipes;
};

using ProverStrategy = std::variant<Honest, IIDNoisy, FixedState, Scripted>;

inline bool is_iid(const ProverStrategy& s) { return !std::holds_alternative<Scripted>(s); }

/// Recipe for register `index` (0-based, sending order).
inline const StateRecipe& recipe_for(const ProverStrategy& strategy, std::uint64_t index,
                                     StateRecipe& scratch) {
  if (std::holds_alternative<Honest>(strategy)) {
    scratch = StateRecipe::hypergraph();
    return scratch;
  }
  if (const auto* noisy = std::get_if<IIDNoisy>(&strategy)) {
    scratch = StateRecipe::hypergraph(noisy->per_qubit_prob);
    return scratch;
  }
  if (const auto* fixed = std::get_if<FixedState>(&strategy)) return fixed->recipe;
  const auto& script = std::get<Scripted>(strategy).recipes;
  if (index >= script.size())
    throw InvalidArgument("script has " + std::to_string(script.size()) +
                          " recipes but register " + std::to_string(index) + " was requested");
  return script[index];
}

/// The single-register state of an i.i.d. strategy; nullopt for scripts.
inline std::optional<Ensemble> iid_ensemble(const ProverStrategy& strategy, const Hypergraph& g) {
  if (!is_iid(strategy)) return std::nullopt;
  StateRecipe scratch;
  return recipe_ensemble(recipe_for(strategy, 0, scratch), g);
}

inline std::string describe(const ProverStrategy& s) {
  if (std::holds_alternative<Honest>(s)) return "honest";
  if (const auto* n = std::get_if<IIDNoisy>(&s)) return "noisy:" + std::to_string(n->per_qubit_prob);
  if (const auto* f = std::get_if<FixedState>(&s)) {
    switch (f->recipe.kind) {
      case StateRecipe::Kind::kHypergraph: return "fixed:hypergraph";
      case StateRecipe::Kind::kZero: return "fixed:zero";
      case StateRecipe::Kind::kPlus: return "fixed:plus";
      case StateRecipe::Kind::kExplicit: return "fixed:explicit";
    }
  }
  return "scripted:" + std::to_string(std::get<Scripted>(s).recipes.size());
}

// ---------------------------------------------------------------------------
// Roles

enum class RoleKind { kDiscard, kGroup, kCompute };

struct Role {
  RoleKind kind = RoleKind::kDiscard;
  Vertex group = 0;  // set when kind == kGroup

  friend bool operator==(const Role&, const Role&) = default;
};

/// Registers are 0-based in sending order.
struct RoleAssignment {
  std::vector<std::uint64_t> permutation;  // slot -> register
  std::vector<Role> roles;                 // register -> role
};

/// Uniform random permutation; slot p is a discard for p < m, the computing
/// register at p == m, and group 1 + (p - m - 1) / k afterwards.
inline RoleAssignment assign_roles(const ProtocolParams& params, Rng& rng) {
  if (!params.runnable) throw BudgetExceeded("parameters are not runnable within the budget");
  const std::uint64_t total = params.total_registers();
  RoleAssignment ra;
  ra.permutation.resize(total);
  for (std::uint64_t p = 0; p < total; ++p) ra.permutation[p] = p;
  for (std::uint64_t p = total; p > 1; --p) std::swap(ra.permutation[p - 1], ra.permutation[rng.below(p)]);
  ra.roles.resize(total);
  for (std::uint64_t p = 0; p < total; ++p) {
    Role role;
    if (p < params.m) {
      role.kind = RoleKind::kDiscard;
    } else if (p == params.m) {
      role.kind = RoleKind::kCompute;
    } else {
      role.kind = RoleKind::kGroup;
      role.group = static_cast<Vertex>(1 + (p - params.m - 1) / params.k);
    }
    ra.roles[ra.permutation[p]] = role;
  }
  return ra;
}

// ---------------------------------------------------------------------------
// Protocol run

struct GroupResult {
  Vertex vertex = 0;
  int r = 0;
  std::uint64_t pass_count = 0;  // K_i
  double threshold = 0.0;
  std::uint64_t min_pass_count = 0;
  bool passed = false;

  friend bool operator==(const GroupResult&, const GroupResult&) = default;
};

struct ProtocolReport {
  ProtocolParams params;
  std::uint64_t seed = 0;
  // Alice's view.
  std::vector<GroupResult> groups;
  bool accepted = false;
  // Auditor's view; Alice never observes this.
  double compute_fidelity = 0.0;
};

/// One execution of the protocol under `seed`. Each register draws from its
/// own named streams, so results do not depend on evaluation order.
inline ProtocolReport run_protocol(const Hypergraph& g, const ProverStrategy& strategy,
                                   const ProtocolParams& params, std::uint64_t seed) {
  if (params.n != g.n()) throw DimensionMismatch("parameters were computed for another hypergraph");
  if (!params.runnable)
    throw BudgetExceeded("protocol needs " + std::to_string(params.total_registers()) +
                         " registers, budget is " + std::to_string(params.register_budget));
  if (const auto* script = std::get_if<Scripted>(&strategy);
      script && script->recipes.size() != params.total_registers())
    throw InvalidArgument("script has " + std::to_string(script->recipes.size()) +
                          " recipes, protocol uses " + std::to_string(params.total_registers()) +
                          " registers");

  Rng role_rng = Rng::stream(seed, "roles");
  const RoleAssignment ra = assign_roles(params, role_rng);

  ProtocolReport report;
  report.params = params;
  report.seed = seed;
  report.groups.resize(g.n());
  for (Vertex i = 1; i <= g.n(); ++i) {
    GroupResult& gr = report.groups[i - 1];
    gr.vertex = i;
    gr.r = params.r_values[i - 1];
    gr.threshold = static_cast<double>(group_threshold(params, gr.r));
    gr.min_pass_count = min_pass_count(params, gr.r);
  }

  StateRecipe scratch;
  for (std::uint64_t reg = 0; reg < ra.roles.size(); ++reg) {
    const Role role = ra.roles[reg];
    if (role.kind == RoleKind::kDiscard) continue;
    Rng prover_rng = Rng::stream(seed, "prover", reg);
    StateVector state = prepare(recipe_for(strategy, reg, scratch), g, prover_rng);
    if (role.kind == RoleKind::kCompute) {
      report.compute_fidelity = fidelity_with(state, g);
    } else {
      Rng test_rng = Rng::stream(seed, "test", reg);
      if (run_stabilizer_test(std::move(state), g, role.group, test_rng).passed)
        ++report.groups[role.group - 1].pass_count;
    }
  }

  report.accepted = true;
  for (GroupResult& gr : report.groups) {
    gr.passed = gr.pass_count >= gr.min_pass_count;
    report.accepted = report.accepted && gr.passed;
  }
  return report;
}

}  // namespace hgv
