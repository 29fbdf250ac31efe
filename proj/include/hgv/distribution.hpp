#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hgv/ensemble.hpp"
#include "hgv/errors.hpp"
#include "hgv/rng.hpp"
#include "hgv/statevector.hpp"

namespace hgv {

inline constexpr int kDistributionCap = 20;

/// Outcome probabilities for a fixed per-qubit basis assignment. Index bit
/// of qubit q is 0 for outcome +1 and 1 for -1.
struct OutcomeDistribution {
  std::vector<Basis> bases;
  std::vector<double> probabilities;

  int n() const { return static_cast<int>(bases.size()); }
  double total() const {
    double s = 0.0;
    for (double p : probabilities) s += p;
    return s;
  }
};

inline std::vector<Basis> parse_bases(const std::string& text) {
  std::vector<Basis> out;
  for (char c : text) {
    if (c == 'X' || c == 'x') out.push_back(Basis::X);
    else if (c == 'Z' || c == 'z') out.push_back(Basis::Z);
    else throw InvalidArgument(std::string("basis must be X or Z, got '") + c + "'");
  }
  return out;
}

inline std::string bases_string(const std::vector<Basis>& bases) {
  std::string s;
  for (Basis b : bases) s += to_char(b);
  return s;
}

namespace detail {

inline void check_bases(int n, const std::vector<Basis>& bases) {
  if (static_cast<int>(bases.size()) != n)
    throw DimensionMismatch("basis assignment has " + std::to_string(bases.size()) +
                            " entries for " + std::to_string(n) + " qubits");
  if (n > kDistributionCap)
    throw CapExceeded("exact distributions limited to " + std::to_string(kDistributionCap) + " qubits");
}

/// Rotates X-basis qubits so every measurement becomes a Z measurement.
inline StateVector rotate_to_z(StateVector s, const std::vector<Basis>& bases) {
  for (Vertex q = 1; q <= s.n(); ++q)
    if (bases[q - 1] == Basis::X) apply_h(s, q);
  return s;
}

}  // namespace detail

inline OutcomeDistribution exact_distribution(const StateVector& s, const std::vector<Basis>& bases) {
  detail::check_bases(s.n(), bases);
  const StateVector r = detail::rotate_to_z(s, bases);
  OutcomeDistribution d{bases, std::vector<double>(r.dim())};
  for (std::size_t z = 0; z < r.dim(); ++z) d.probabilities[z] = std::norm(r[z]);
  return d;
}

inline OutcomeDistribution exact_distribution(const Ensemble& rho, const std::vector<Basis>& bases) {
  if (rho.members.empty()) throw InvalidArgument("empty ensemble");
  detail::check_bases(rho.n(), bases);
  OutcomeDistribution d{bases, std::vector<double>(std::size_t{1} << rho.n(), 0.0)};
  for (const auto& m : rho.members) {
    const StateVector r = detail::rotate_to_z(m.state, bases);
    for (std::size_t z = 0; z < r.dim(); ++z) d.probabilities[z] += m.weight * std::norm(r[z]);
  }
  return d;
}

inline double l1_distance(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  if (p.bases != q.bases) throw InvalidArgument("distributions use different basis assignments");
  double s = 0.0;
  for (std::size_t z = 0; z < p.probabilities.size(); ++z)
    s += std::abs(p.probabilities[z] - q.probabilities[z]);
  return s;
}

/// Trivial classical sampler: every outcome equally likely.
inline OutcomeDistribution uniform_distribution(const std::vector<Basis>& bases) {
  const std::size_t dim = std::size_t{1} << bases.size();
  return {bases, std::vector<double>(dim, 1.0 / static_cast<double>(dim))};
}

/// Classical sampler that reproduces single-qubit marginals of p independently.
inline OutcomeDistribution product_of_marginals(const OutcomeDistribution& p) {
  const int n = p.n();
  std::vector<double> one(n, 0.0);  // P[bit q = 1]
  for (std::size_t z = 0; z < p.probabilities.size(); ++z)
    for (Vertex q = 1; q <= n; ++q)
      if (z & qubit_bit(n, q)) one[q - 1] += p.probabilities[z];
  OutcomeDistribution out{p.bases, std::vector<double>(p.probabilities.size(), 1.0)};
  for (std::size_t z = 0; z < out.probabilities.size(); ++z)
    for (Vertex q = 1; q <= n; ++q)
      out.probabilities[z] *= (z & qubit_bit(n, q)) ? one[q - 1] : 1.0 - one[q - 1];
  return out;
}

/// One shot: sequential single-qubit measurements with collapse, qubit 1 first.
inline std::uint64_t sample_outcome(StateVector s, const std::vector<Basis>& bases, Rng& rng) {
  detail::check_bases(s.n(), bases);
  std::uint64_t z = 0;
  for (Vertex q = 1; q <= s.n(); ++q)
    if (measure_pauli(s, q, bases[q - 1], rng).outcome == -1) z |= qubit_bit(s.n(), q);
  return z;
}

}  // namespace hgv
