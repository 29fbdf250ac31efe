#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hgv/ensemble.hpp"
#include "hgv/errors.hpp"
#include "hgv/hypergraph.hpp"
#include "hgv/pauli.hpp"
#include "hgv/rng.hpp"
#include "hgv/statevector.hpp"

namespace hgv {

/// Choice t_{j,k} in {1,2,3,4} for every pair of W_i^CZ:
///   1 -> I_j I_k,  2 -> I_j Z_k,  3 -> Z_j I_k,  4 -> -Z_j Z_k.
struct TermIndex {
  std::vector<std::pair<VertexPair, int>> entries;  // same order as Neighborhood::cz_neighbors

  friend bool operator==(const TermIndex&, const TermIndex&) = default;
};

/// Outcome of one stabilizer test on one register.
struct TestOutcome {
  TermIndex index;
  StabilizerTerm term;
  int x_result = +1;
  std::vector<std::pair<Vertex, int>> z_results;  // ascending vertex order
  bool passed = false;
};

/// Limit on r for exhaustive term enumeration (4^r terms).
struct EnumerationLimits {
  int max_r = 10;
};

namespace detail {

inline void toggle(std::vector<Vertex>& sorted, Vertex v) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
  if (it != sorted.end() && *it == v) sorted.erase(it);
  else sorted.insert(it, v);
}

inline void check_domain(const Neighborhood& nb, const TermIndex& t) {
  if (t.entries.size() != nb.cz_neighbors.size())
    throw InvalidArgument("term index has " + std::to_string(t.entries.size()) +
                          " entries, neighborhood has r = " + std::to_string(nb.r()));
  for (std::size_t p = 0; p < t.entries.size(); ++p) {
    if (!(t.entries[p].first == nb.cz_neighbors[p]))
      throw InvalidArgument("term index domain differs from W^CZ at position " +
                            std::to_string(p));
    if (t.entries[p].second < 1 || t.entries[p].second > 4)
      throw InvalidArgument("term index value must be in {1,2,3,4}");
  }
}

inline void check_enumerable(const Neighborhood& nb, EnumerationLimits limits) {
  if (nb.r() > limits.max_r)
    throw CapExceeded("r = " + std::to_string(nb.r()) + " exceeds enumeration cap " +
                      std::to_string(limits.max_r));
}

}  // namespace detail

/// Computes alpha_t and D_t in one pass over W_i^CZ. D_t starts at W_i^Z and
/// each Z factor toggles membership, since Z^2 = I.
inline StabilizerTerm expand_term(const Neighborhood& nb, Vertex i, const TermIndex& t) {
  if (nb.vertex != 0 && nb.vertex != i) throw InvalidArgument("neighborhood belongs to another vertex");
  detail::check_domain(nb, t);
  StabilizerTerm term;
  term.x_vertex = i;
  term.z_support = nb.z_neighbors;
  for (const auto& [pair, value] : t.entries) {
    switch (value) {
      case 1:
        break;
      case 2:
        detail::toggle(term.z_support, pair.k);
        break;
      case 3:
        detail::toggle(term.z_support, pair.j);
        break;
      case 4:
        term.alpha ^= 1;
        detail::toggle(term.z_support, pair.j);
        detail::toggle(term.z_support, pair.k);
        break;
    }
  }
  if (std::binary_search(term.z_support.begin(), term.z_support.end(), i))
    throw NumericalError("Z support contains the X vertex");
  return term;
}

/// Visits all 4^r terms in lexicographic order of t (first pair most significant).
template <typename Fn>
void for_each_term(const Neighborhood& nb, Vertex i, Fn&& fn, EnumerationLimits limits = {}) {
  detail::check_enumerable(nb, limits);
  TermIndex t;
  for (const VertexPair& p : nb.cz_neighbors) t.entries.push_back({p, 1});
  while (true) {
    fn(t, expand_term(nb, i, t));
    int pos = nb.r() - 1;
    while (pos >= 0 && t.entries[pos].second == 4) t.entries[pos--].second = 1;
    if (pos < 0) break;
    ++t.entries[pos].second;
  }
}

inline std::vector<StabilizerTerm> enumerate_terms(const Neighborhood& nb, Vertex i,
                                                   EnumerationLimits limits = {}) {
  std::vector<StabilizerTerm> terms;
  for_each_term(
      nb, i, [&](const TermIndex&, StabilizerTerm term) { terms.push_back(std::move(term)); },
      limits);
  return terms;
}

/// Draws t uniformly from {1,2,3,4}^r.
inline std::pair<TermIndex, StabilizerTerm> sample_term(const Neighborhood& nb, Vertex i, Rng& rng) {
  TermIndex t;
  t.entries.reserve(nb.cz_neighbors.size());
  for (const VertexPair& p : nb.cz_neighbors) t.entries.push_back({p, 1 + static_cast<int>(rng.below(4))});
  StabilizerTerm term = expand_term(nb, i, t);
  return {std::move(t), std::move(term)};
}

/// One stabilizer test for g_i: sample t, measure X on i, then Z on D_t in
/// ascending order. Unmeasured qubits are traced out.
inline TestOutcome run_stabilizer_test(StateVector reg, const Hypergraph& g, Vertex i, Rng& rng) {
  if (reg.n() != g.n())
    throw DimensionMismatch("register has " + std::to_string(reg.n()) + " qubits, expected " +
                            std::to_string(g.n()));
  const Neighborhood nb = neighborhood(g, i);
  auto [index, term] = sample_term(nb, i, rng);

  TestOutcome out;
  out.x_result = measure_pauli(reg, i, Basis::X, rng).outcome;
  int product = out.x_result;
  for (Vertex j : term.z_support) {
    const int z = measure_pauli(reg, j, Basis::Z, rng).outcome;
    out.z_results.push_back({j, z});
    product *= z;
  }
  out.passed = product == ((term.alpha & 1) ? -1 : +1);
  out.index = std::move(index);
  out.term = std::move(term);
  return out;
}

/// Exact pass probability (1/4^r) sum_t Tr(rho (I + s_t)/2), by enumeration.
inline double pass_probability(const Ensemble& rho, const Hypergraph& g, Vertex i,
                               EnumerationLimits limits = {}) {
  const Neighborhood nb = neighborhood(g, i);
  for (const auto& m : rho.members)
    if (m.state.n() != g.n()) throw DimensionMismatch("ensemble member width");
  double sum = 0.0;
  std::uint64_t count = 0;
  for_each_term(
      nb, i,
      [&](const TermIndex&, const StabilizerTerm& term) {
        double e = 0.0;
        for (const auto& m : rho.members) e += m.weight * pauli_expectation(m.state, term);
        sum += e;
        ++count;
      },
      limits);
  return 0.5 + 0.5 * sum / static_cast<double>(count);
}

inline double pass_probability(const StateVector& s, const Hypergraph& g, Vertex i,
                               EnumerationLimits limits = {}) {
  // Avoids copying s into an Ensemble.
  const Neighborhood nb = neighborhood(g, i);
  if (s.n() != g.n()) throw DimensionMismatch("state width differs from hypergraph");
  double sum = 0.0;
  std::uint64_t count = 0;
  for_each_term(
      nb, i,
      [&](const TermIndex&, const StabilizerTerm& term) {
        sum += pauli_expectation(s, term);
        ++count;
      },
      limits);
  return 0.5 + 0.5 * sum / static_cast<double>(count);
}

/// <s| g_i |s>, applying the stabilizer operator directly.
inline double stabilizer_expectation(const StateVector& s, const Hypergraph& g, Vertex i) {
  StateVector t = s;
  apply_stabilizer(t, g, i);
  return std::real(inner_product(s, t));
}

inline double stabilizer_expectation(const Ensemble& rho, const Hypergraph& g, Vertex i) {
  double e = 0.0;
  for (const auto& m : rho.members) e += m.weight * stabilizer_expectation(m.state, g, i);
  return e;
}

/// 1/2 + Tr(rho g_i) / 2^{r+1}; no enumeration, so no cap on r.
inline double closed_form_pass_probability(double stabilizer_expectation_value, int r) {
  return 0.5 + stabilizer_expectation_value / std::ldexp(1.0, r + 1);
}

}  // namespace hgv
