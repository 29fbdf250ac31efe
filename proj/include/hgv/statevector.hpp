#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hgv/errors.hpp"
#include "hgv/hypergraph.hpp"
#include "hgv/pauli.hpp"
#include "hgv/rng.hpp"

namespace hgv {

using Amplitude = std::complex<double>;

/// Normalization tolerance shared by every kernel.
inline constexpr double kNormTolerance = 1e-9;

/// Upper bound on register width; protects against accidental 2^n blowup.
struct SimulationLimits {
  int max_qubits = 24;
};

enum class Basis { X, Z };

inline char to_char(Basis b) { return b == Basis::X ? 'X' : 'Z'; }

struct MeasurementRecord {
  Basis basis = Basis::Z;
  Vertex qubit = 0;
  int outcome = +1;  // +1 or -1

  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

/// Dense pure state of n qubits. Qubit 1 is the most significant bit of the
/// amplitude index.
class StateVector {
 public:
  StateVector() = default;

  /// |0...0> on n qubits.
  explicit StateVector(int n, SimulationLimits limits = {}) : n_(n) {
    if (n < 1) throw InvalidArgument("state needs at least one qubit");
    if (n > limits.max_qubits)
      throw CapExceeded(std::to_string(n) + " qubits exceeds simulation cap of " +
                        std::to_string(limits.max_qubits));
    amps_.assign(std::size_t{1} << n, Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
  }

  static StateVector from_amplitudes(std::vector<Amplitude> amps) {
    if (amps.empty() || !std::has_single_bit(amps.size()) || amps.size() < 2)
      throw DimensionMismatch("amplitude count must be a power of two >= 2");
    StateVector s;
    s.n_ = std::countr_zero(amps.size());
    s.amps_ = std::move(amps);
    return s;
  }

  static StateVector plus(int n, SimulationLimits limits = {}) {
    StateVector s(n, limits);
    const double a = std::pow(2.0, -0.5 * n);
    for (auto& x : s.amps_) x = a;
    return s;
  }

  /// Computational basis state |index>.
  static StateVector basis_state(int n, std::uint64_t index, SimulationLimits limits = {}) {
    StateVector s(n, limits);
    if (index >= s.dim()) throw RangeError("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
  }

  int n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  std::span<Amplitude> amplitudes() noexcept { return amps_; }
  const Amplitude& operator[](std::size_t i) const noexcept { return amps_[i]; }
  Amplitude& operator[](std::size_t i) noexcept { return amps_[i]; }

  std::uint64_t bit(Vertex q) const {
    if (q < 1 || q > n_)
      throw RangeError("qubit " + std::to_string(q) + " outside [1, " + std::to_string(n_) + "]");
    return qubit_bit(n_, q);
  }

  double norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  void normalize() {
    const double ns = norm_squared();
    if (ns < kNormTolerance) throw NumericalError("cannot normalize a zero vector");
    const double inv = 1.0 / std::sqrt(ns);
    for (auto& a : amps_) a *= inv;
  }

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  int n_ = 0;
  std::vector<Amplitude> amps_;
};

inline void apply_x(StateVector& s, Vertex q) {
  const std::uint64_t m = s.bit(q);
  for (std::uint64_t b = 0; b < s.dim(); ++b)
    if (!(b & m)) std::swap(s[b], s[b | m]);
}

inline void apply_z(StateVector& s, Vertex q) {
  const std::uint64_t m = s.bit(q);
  for (std::uint64_t b = 0; b < s.dim(); ++b)
    if (b & m) s[b] = -s[b];
}

/// Y = iXZ: |0> -> i|1>, |1> -> -i|0>.
inline void apply_y(StateVector& s, Vertex q) {
  const std::uint64_t m = s.bit(q);
  const Amplitude i{0.0, 1.0};
  for (std::uint64_t b = 0; b < s.dim(); ++b) {
    if (b & m) continue;
    const Amplitude a0 = s[b];
    const Amplitude a1 = s[b | m];
    s[b] = -i * a1;
    s[b | m] = i * a0;
  }
}

inline void apply_h(StateVector& s, Vertex q) {
  const std::uint64_t m = s.bit(q);
  const double h = 1.0 / std::sqrt(2.0);
  for (std::uint64_t b = 0; b < s.dim(); ++b) {
    if (b & m) continue;
    const Amplitude a0 = s[b];
    const Amplitude a1 = s[b | m];
    s[b] = h * (a0 + a1);
    s[b | m] = h * (a0 - a1);
  }
}

/// Negates every amplitude whose bits are all 1 on the vertices of e.
///
/// Walks only the 2^(n-|e|) indices that contain the edge mask.
inline void apply_generalized_cz(StateVector& s, const Edge& e) {
  std::uint64_t mask = 0;
  for (Vertex v : e) mask |= s.bit(v);
  const std::uint64_t free = (s.dim() - 1) & ~mask;
  std::uint64_t sub = 0;
  do {
    auto& a = s[sub | mask];
    a = -a;
    sub = (sub - free) & free;
  } while (sub != 0);
}

inline void apply_cz(StateVector& s, Vertex j, Vertex k) { apply_generalized_cz(s, Edge(j, k)); }

/// prod_e CZ~_e |+>^n.
inline StateVector build_hypergraph_state(const Hypergraph& g, SimulationLimits limits = {}) {
  StateVector s = StateVector::plus(g.n(), limits);
  for (const Edge& e : g.edges()) apply_generalized_cz(s, e);
  return s;
}

/// Applies the stabilizer g_i = X_i prod_{W^Z} Z_j prod_{W^CZ} CZ_{j,k} as an
/// operator, rightmost factor first.
inline void apply_stabilizer(StateVector& s, const Hypergraph& g, Vertex i) {
  const Neighborhood nb = neighborhood(g, i);
  for (const VertexPair& p : nb.cz_neighbors) apply_cz(s, p.j, p.k);
  for (Vertex j : nb.z_neighbors) apply_z(s, j);
  apply_x(s, i);
}

/// Born-rule measurement of X or Z on one qubit, collapsing s in place.
///
/// A branch whose probability falls below kNormTolerance is never selected.
inline MeasurementRecord measure_pauli(StateVector& s, Vertex q, Basis basis, Rng& rng) {
  const std::uint64_t m = s.bit(q);
  const double total = s.norm_squared();
  if (total < kNormTolerance) throw NumericalError("degenerate state norm before measurement");

  double p_plus = 0.0;
  if (basis == Basis::Z) {
    for (std::uint64_t b = 0; b < s.dim(); ++b)
      if (!(b & m)) p_plus += std::norm(s[b]);
  } else {
    // ||(I + X)/2 |s>||^2 summed over pairs (b, b|m).
    for (std::uint64_t b = 0; b < s.dim(); ++b)
      if (!(b & m)) p_plus += 0.5 * std::norm(s[b] + s[b | m]);
  }
  p_plus /= total;
  const double p_minus = 1.0 - p_plus;

  int outcome;
  if (p_plus < kNormTolerance) {
    outcome = -1;
  } else if (p_minus < kNormTolerance) {
    outcome = +1;
  } else {
    outcome = rng.uniform01() < p_plus ? +1 : -1;
  }

  if (basis == Basis::Z) {
    for (std::uint64_t b = 0; b < s.dim(); ++b) {
      const bool one = (b & m) != 0;
      if (one == (outcome == +1)) s[b] = 0.0;
    }
  } else {
    const double sign = outcome;
    for (std::uint64_t b = 0; b < s.dim(); ++b) {
      if (b & m) continue;
      const Amplitude a0 = s[b];
      const Amplitude a1 = s[b | m];
      s[b] = 0.5 * (a0 + sign * a1);
      s[b | m] = 0.5 * (a1 + sign * a0);
    }
  }
  s.normalize();
  return {basis, q, outcome};
}

/// <s| P |s> for a Pauli term P.
inline double pauli_expectation(const StateVector& s, const StabilizerTerm& term) {
  s.bit(term.x_vertex);
  for (Vertex j : term.z_support) s.bit(j);
  const PauliMask p = to_mask(term, s.n());
  double acc = 0.0;
  for (std::uint64_t b = 0; b < s.dim(); ++b) {
    const double v = std::real(std::conj(s[b ^ p.x]) * s[b]);
    acc += (std::popcount(b & p.z) & 1) ? -v : v;
  }
  return p.negative ? -acc : acc;
}

inline Amplitude inner_product(const StateVector& a, const StateVector& b) {
  if (a.n() != b.n()) throw DimensionMismatch("inner product of different widths");
  Amplitude acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

/// |<G|s>|^2.
inline double fidelity_with(const StateVector& s, const Hypergraph& g) {
  if (s.n() != g.n())
    throw DimensionMismatch("state has " + std::to_string(s.n()) + " qubits, hypergraph has " +
                            std::to_string(g.n()) + " vertices");
  return fidelity(build_hypergraph_state(g, {s.n()}), s);
}

/// With probability p per qubit, applies X, Y or Z chosen uniformly.
inline void apply_pauli_noise(StateVector& s, double per_qubit_prob, Rng& rng) {
  if (!(per_qubit_prob >= 0.0 && per_qubit_prob <= 1.0))
    throw InvalidArgument("noise probability must lie in [0, 1]");
  for (Vertex q = 1; q <= s.n(); ++q) {
    if (!(rng.uniform01() < per_qubit_prob)) continue;
    switch (rng.below(3)) {
      case 0: apply_x(s, q); break;
      case 1: apply_y(s, q); break;
      default: apply_z(s, q); break;
    }
  }
}

inline std::string bitstring(std::uint64_t index, int n) {
  std::string out(n, '0');
  for (int q = 1; q <= n; ++q)
    if (index & qubit_bit(n, q)) out[q - 1] = '1';
  return out;
}

/// Debug dump: one `bitstring real imag` line per amplitude.
inline void dump_state(const StateVector& s, std::ostream& out) {
  char buf[96];
  for (std::uint64_t b = 0; b < s.dim(); ++b) {
    std::snprintf(buf, sizeof buf, " %.17g %.17g\n", s[b].real() + 0.0, s[b].imag() + 0.0);
    out << bitstring(b, s.n()) << buf;
  }
}

}  // namespace hgv
