#pragma once

// Brute-force dense-matrix oracle. Everything here is built from 2x2 matrices
// and Kronecker products; none of it goes through the statevector kernels, so
// it can certify them.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "hgv/ensemble.hpp"
#include "hgv/errors.hpp"
#include "hgv/hypergraph.hpp"
#include "hgv/pauli.hpp"
#include "hgv/stabilizer.hpp"
#include "hgv/statevector.hpp"

namespace hgv::oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

inline constexpr int kMaxOracleQubits = 6;

inline void check_cap(int n) {
  if (n < 1 || n > kMaxOracleQubits)
    throw CapExceeded("dense oracle supports 1.." + std::to_string(kMaxOracleQubits) +
                      " qubits, got " + std::to_string(n));
}

inline Matrix pauli_i() { return Matrix::Identity(2, 2); }
inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
inline Matrix projector_one() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 1) = 1;
  return m;
}
inline Matrix hadamard() {
  Matrix m(2, 2);
  const double h = 1.0 / std::sqrt(2.0);
  m << h, h, h, -h;
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// ops[q-1] acting on qubit q; qubit 1 is the leftmost Kronecker factor.
inline Matrix tensor(const std::vector<Matrix>& ops) {
  Matrix out = ops.front();
  for (std::size_t q = 1; q < ops.size(); ++q) out = kron(out, ops[q]);
  return out;
}

/// Single-qubit operator embedded on qubit q of n.
inline Matrix on_qubit(int n, Vertex q, const Matrix& op) {
  std::vector<Matrix> ops(n, pauli_i());
  ops[q - 1] = op;
  return tensor(ops);
}

inline Matrix identity(int n) { return Matrix::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n); }

/// I - 2 (|1><1|)^{(x) e}.
inline Matrix generalized_cz(int n, const Edge& e) {
  std::vector<Matrix> ops(n, pauli_i());
  for (Vertex v : e) ops[v - 1] = projector_one();
  return identity(n) - 2.0 * tensor(ops);
}

inline Matrix edge_unitary(const Hypergraph& g) {
  check_cap(g.n());
  Matrix u = identity(g.n());
  for (const Edge& e : g.edges()) u = generalized_cz(g.n(), e) * u;
  return u;
}

inline Vector plus_state(int n) {
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Matrix v = plus;
  for (int q = 1; q < n; ++q) v = kron(v, Matrix(plus));
  return v.col(0);
}

/// |G> = U_E |+>^n.
inline Vector hypergraph_state(const Hypergraph& g) { return edge_unitary(g) * plus_state(g.n()); }

/// g_i = U_E X_i U_E.
inline Matrix stabilizer(const Hypergraph& g, Vertex i) {
  const Matrix u = edge_unitary(g);
  return u * on_qubit(g.n(), i, pauli_x()) * u;
}

/// sigma_{j,k}(t) on n qubits.
inline Matrix sigma(int n, const VertexPair& p, int t) {
  switch (t) {
    case 1: return identity(n);
    case 2: return on_qubit(n, p.k, pauli_z());
    case 3: return on_qubit(n, p.j, pauli_z());
    case 4: return -(on_qubit(n, p.j, pauli_z()) * on_qubit(n, p.k, pauli_z()));
  }
  throw InvalidArgument("sigma index must be in {1,2,3,4}");
}

/// s_t assembled literally as X_i prod_{W^Z} Z_j prod sigma_{j,k}(t_{j,k}).
inline Matrix term_from_index(const Hypergraph& g, Vertex i, const TermIndex& t) {
  const int n = g.n();
  const Neighborhood nb = neighborhood(g, i);
  Matrix m = on_qubit(n, i, pauli_x());
  for (Vertex j : nb.z_neighbors) m = m * on_qubit(n, j, pauli_z());
  for (const auto& [pair, value] : t.entries) m = m * sigma(n, pair, value);
  return m;
}

/// (-1)^alpha X_i prod_{D} Z_j via Kronecker products.
inline Matrix term_matrix(const StabilizerTerm& term, int n) {
  std::vector<Matrix> ops(n, pauli_i());
  ops[term.x_vertex - 1] = pauli_x();
  for (Vertex j : term.z_support) ops[j - 1] = pauli_z();
  Matrix m = tensor(ops);
  return (term.alpha & 1) ? Matrix(-m) : m;
}

/// Adds w * term into acc by writing its signed-permutation entries directly.
/// Used where 4^r Kronecker products would be too slow.
inline void accumulate_term(Matrix& acc, const StabilizerTerm& term, int n, double w) {
  const std::uint64_t xm = qubit_bit(n, term.x_vertex);
  std::uint64_t zm = 0;
  for (Vertex j : term.z_support) zm |= qubit_bit(n, j);
  const double sign = (term.alpha & 1) ? -w : w;
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t b = 0; b < dim; ++b) {
    const int parity = __builtin_popcountll(b & zm) & 1;
    acc(static_cast<Eigen::Index>(b ^ xm), static_cast<Eigen::Index>(b)) += parity ? -sign : sign;
  }
}

inline Vector to_vector(const StateVector& s) {
  Vector v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t b = 0; b < s.dim(); ++b) v(static_cast<Eigen::Index>(b)) = s[b];
  return v;
}

inline Matrix density(const Vector& v) { return v * v.adjoint(); }

inline Matrix density(const Ensemble& e) {
  check_cap(e.n());
  const Eigen::Index dim = Eigen::Index{1} << e.n();
  Matrix rho = Matrix::Zero(dim, dim);
  for (const auto& m : e.members) rho += m.weight * density(to_vector(m.state));
  return rho;
}

/// Exact channel: each qubit independently gets X, Y or Z with total prob p.
inline Matrix pauli_noise_channel(const Matrix& rho, int n, double p) {
  Matrix out = rho;
  for (Vertex q = 1; q <= n; ++q) {
    const Matrix x = on_qubit(n, q, pauli_x());
    const Matrix y = on_qubit(n, q, pauli_y());
    const Matrix z = on_qubit(n, q, pauli_z());
    out = (1.0 - p) * out + (p / 3.0) * (x * out * x + y * out * y + z * out * z);
  }
  return out;
}

inline double expectation(const Matrix& rho, const Matrix& op) { return (rho * op).trace().real(); }

inline double fidelity(const Matrix& rho, const Hypergraph& g) {
  const Vector gv = hypergraph_state(g);
  return (gv.adjoint() * rho * gv)(0, 0).real();
}

/// 1/2 + Tr(rho g_i) / 2^{r+1} with g_i as a dense matrix.
inline double closed_form_pass_probability(const Matrix& rho, const Hypergraph& g, Vertex i) {
  const int r = neighborhood(g, i).r();
  return 0.5 + expectation(rho, stabilizer(g, i)) / std::ldexp(1.0, r + 1);
}

/// Average over all t of Tr(rho (I + s_t)/2), each s_t built by term_from_index.
inline double enumerated_pass_probability(const Matrix& rho, const Hypergraph& g, Vertex i) {
  const Neighborhood nb = neighborhood(g, i);
  if (nb.r() > 5) throw CapExceeded("oracle term enumeration limited to r <= 5");
  double sum = 0.0;
  int count = 0;
  TermIndex t;
  for (const VertexPair& p : nb.cz_neighbors) t.entries.push_back({p, 1});
  while (true) {
    sum += 0.5 + 0.5 * expectation(rho, term_from_index(g, i, t));
    ++count;
    int pos = nb.r() - 1;
    while (pos >= 0 && t.entries[pos].second == 4) t.entries[pos--].second = 1;
    if (pos < 0) break;
    ++t.entries[pos].second;
  }
  return sum / count;
}

/// Outcome probabilities when qubit q is measured in bases[q-1]; index bit 0
/// means outcome +1.
inline std::vector<double> outcome_distribution(const Matrix& rho, int n,
                                                const std::vector<Basis>& bases) {
  std::vector<Matrix> ops;
  for (Basis b : bases) ops.push_back(b == Basis::X ? hadamard() : pauli_i());
  const Matrix u = tensor(ops);
  const Matrix rotated = u * rho * u.adjoint();
  std::vector<double> p(std::size_t{1} << n);
  for (std::size_t z = 0; z < p.size(); ++z) p[z] = rotated(z, z).real();
  return p;
}

struct Check {
  std::string name;
  bool passed = true;
  double max_deviation = 0.0;
  std::string detail;  // offending indices when failed
};

struct OracleReport {
  int n = 0;
  std::vector<Check> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Materializes every g_i and certifies the stabilizer identities, the term
/// expansion sum_t s_t = 2^r g_i, and agreement of the engine's |G>.
inline OracleReport oracle_checks(const Hypergraph& g, double tol = 1e-9) {
  check_cap(g.n());
  const int n = g.n();
  OracleReport report;
  report.n = n;

  std::vector<Matrix> gens;
  for (Vertex i = 1; i <= n; ++i) gens.push_back(stabilizer(g, i));
  const Vector gv = hypergraph_state(g);
  const Matrix id = identity(n);

  auto record = [&](Check& c, double dev, const std::string& where) {
    if (dev > c.max_deviation) c.max_deviation = dev;
    if (dev > tol) {
      c.passed = false;
      if (!c.detail.empty()) c.detail += "; ";
      std::ostringstream os;
      os << where << " deviates by " << dev;
      c.detail += os.str();
    }
  };

  Check commutation{"commutation [g_i, g_j] = 0", true, 0.0, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      record(commutation, max_abs(gens[i] * gens[j] - gens[j] * gens[i]),
             "i=" + std::to_string(i + 1) + ",j=" + std::to_string(j + 1));

  Check stabilization{"stabilization g_i|G> = |G>", true, 0.0, {}};
  for (int i = 0; i < n; ++i)
    record(stabilization, (gens[i] * gv - gv).cwiseAbs().maxCoeff(), "i=" + std::to_string(i + 1));

  Check involution{"involution g_i^2 = I", true, 0.0, {}};
  for (int i = 0; i < n; ++i)
    record(involution, max_abs(gens[i] * gens[i] - id), "i=" + std::to_string(i + 1));

  Check projector{"projector prod_i (I + g_i)/2 = |G><G|", true, 0.0, {}};
  {
    Matrix prod = id;
    for (int i = 0; i < n; ++i) prod = prod * (0.5 * (id + gens[i]));
    record(projector, max_abs(prod - density(gv)), "product");
  }

  Check expansion{"expansion sum_t s_t = 2^r g_i", true, 0.0, {}};
  for (Vertex i = 1; i <= n; ++i) {
    const Neighborhood nb = neighborhood(g, i);
    Matrix acc = Matrix::Zero(id.rows(), id.cols());
    for_each_term(nb, i, [&](const TermIndex&, const StabilizerTerm& term) {
      accumulate_term(acc, term, n, 1.0);
    });
    record(expansion, max_abs(acc - std::ldexp(1.0, nb.r()) * gens[i - 1]),
           "i=" + std::to_string(i) + " (r=" + std::to_string(nb.r()) + ")");
  }

  Check engine{"engine state matches U_E|+>^n", true, 0.0, {}};
  record(engine, (to_vector(build_hypergraph_state(g)) - gv).cwiseAbs().maxCoeff(), "|G>");

  report.checks = {commutation, stabilization, involution, projector, expansion, engine};
  return report;
}

}  // namespace hgv::oracle
