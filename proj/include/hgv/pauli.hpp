#pragma once

#include <cstdint>
#include <vector>

#include "hgv/hypergraph.hpp"

namespace hgv {

/// The Pauli operator (-1)^alpha X_{x_vertex} prod_{j in z_support} Z_j.
struct StabilizerTerm {
  int alpha = 0;
  Vertex x_vertex = 0;
  std::vector<Vertex> z_support;  // sorted ascending, never contains x_vertex

  friend bool operator==(const StabilizerTerm&, const StabilizerTerm&) = default;
};

/// Basis-index bit of a 1-based qubit in an n-qubit register.
constexpr std::uint64_t qubit_bit(int n, Vertex q) noexcept {
  return std::uint64_t{1} << (n - q);
}

/// Bitmask form of a StabilizerTerm for a fixed register width.
struct PauliMask {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  bool negative = false;
};

inline PauliMask to_mask(const StabilizerTerm& term, int n) {
  PauliMask m;
  m.x = qubit_bit(n, term.x_vertex);
  for (Vertex j : term.z_support) m.z |= qubit_bit(n, j);
  m.negative = (term.alpha & 1) != 0;
  return m;
}

}  // namespace hgv
