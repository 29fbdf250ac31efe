#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hgv/errors.hpp"
#include "hgv/statevector.hpp"

namespace hgv {

struct WeightedState {
  double weight = 1.0;
  StateVector state;
};

/// A finite mixture of pure states; stands in for a density matrix.
struct Ensemble {
  std::vector<WeightedState> members;

  int n() const { return members.empty() ? 0 : members.front().state.n(); }

  double total_weight() const {
    double w = 0.0;
    for (const auto& m : members) w += m.weight;
    return w;
  }
};

inline Ensemble pure_ensemble(StateVector s) { return {{{1.0, std::move(s)}}}; }

/// I / 2^n as the uniform mixture of computational basis states.
inline Ensemble maximally_mixed(int n, SimulationLimits limits = {}) {
  if (n > 16) throw CapExceeded("maximally mixed ensemble limited to 16 qubits");
  Ensemble e;
  const std::uint64_t dim = std::uint64_t{1} << n;
  const double w = 1.0 / static_cast<double>(dim);
  for (std::uint64_t b = 0; b < dim; ++b) e.members.push_back({w, StateVector::basis_state(n, b, limits)});
  return e;
}

inline constexpr int kNoiseEnsembleCap = 8;

/// Exact ensemble of apply_pauli_noise(s, p): all 4^n Pauli patterns with
/// their probabilities. Zero-weight patterns are dropped.
inline Ensemble pauli_noise_ensemble(const StateVector& s, double per_qubit_prob) {
  if (!(per_qubit_prob >= 0.0 && per_qubit_prob <= 1.0))
    throw InvalidArgument("noise probability must lie in [0, 1]");
  const int n = s.n();
  if (n > kNoiseEnsembleCap)
    throw CapExceeded("exact noise ensemble limited to " + std::to_string(kNoiseEnsembleCap) +
                      " qubits");
  Ensemble e;
  const std::uint64_t patterns = std::uint64_t{1} << (2 * n);
  for (std::uint64_t pat = 0; pat < patterns; ++pat) {
    double w = 1.0;
    StateVector t = s;
    for (Vertex q = 1; q <= n; ++q) {
      const int op = static_cast<int>((pat >> (2 * (q - 1))) & 3);
      if (op == 0) {
        w *= 1.0 - per_qubit_prob;
        continue;
      }
      w *= per_qubit_prob / 3.0;
      if (op == 1) apply_x(t, q);
      else if (op == 2) apply_y(t, q);
      else apply_z(t, q);
    }
    if (w > 0.0) e.members.push_back({w, std::move(t)});
  }
  return e;
}

inline double fidelity_with(const Ensemble& e, const Hypergraph& g) {
  const StateVector target = build_hypergraph_state(g, {g.n()});
  double f = 0.0;
  for (const auto& m : e.members) {
    if (m.state.n() != g.n()) throw DimensionMismatch("ensemble member width");
    f += m.weight * fidelity(target, m.state);
  }
  return f;
}

}  // namespace hgv
