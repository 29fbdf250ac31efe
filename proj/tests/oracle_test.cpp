#include "hgv/oracle.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "test_support.hpp"

using namespace hgv;

namespace {

Hypergraph load(const std::string& name) {
  std::ifstream in(fixtures::graph_path(name));
  if (!in) throw std::runtime_error("missing graph file " + name);
  return parse_hypergraph(in);
}

}  // namespace

class SampleGraphs : public ::testing::TestWithParam<std::string> {};

TEST_P(SampleGraphs, identities_hold) {
  const Hypergraph g = load(GetParam());
  const oracle::OracleReport report = oracle::oracle_checks(g);
  ASSERT_EQ(report.checks.size(), 6u);
  for (const auto& c : report.checks) {
    EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
    EXPECT_LT(c.max_deviation, 1e-9) << c.name;
  }
  EXPECT_TRUE(report.all_passed());
}

INSTANTIATE_TEST_SUITE_P(Oracle, SampleGraphs,
                         ::testing::Values("edge.hg", "tri.hg", "mixed3.hg", "mixed4.hg", "cycle4.hg",
                                           "fan5.hg", "hex6.hg"),
                         [](const auto& info) { return info.param.substr(0, info.param.find('.')); });

TEST(Oracle, identities_hold_on_random_graphs_property) {
  Rng rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    const Hypergraph g = fixtures::random_hypergraph(rng, 1 + static_cast<int>(rng.below(5)));
    EXPECT_TRUE(oracle::oracle_checks(g).all_passed()) << serialize(g);
  }
}

TEST(Oracle, detects_a_wrong_stabilizer) {
  // A plausible but wrong g_1 (missing the Z_2 factor) must fail stabilization.
  const Hypergraph g(2, {Edge(1, 2)});
  const oracle::Vector gv = oracle::hypergraph_state(g);
  const oracle::Matrix wrong = oracle::on_qubit(2, 1, oracle::pauli_x());
  EXPECT_GT((wrong * gv - gv).cwiseAbs().maxCoeff(), 0.5);
}

TEST(Oracle, literal_term_matches_expanded_term_property) {
  Rng rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(3));
    const Hypergraph g = fixtures::random_hypergraph(rng, n, 0.4, 0.5);
    for (Vertex i = 1; i <= n; ++i) {
      const Neighborhood nb = neighborhood(g, i);
      if (nb.r() > 4) continue;
      for_each_term(nb, i, [&](const TermIndex& t, const StabilizerTerm& term) {
        const oracle::Matrix literal = oracle::term_from_index(g, i, t);
        const oracle::Matrix expanded = oracle::term_matrix(term, n);
        EXPECT_LT(oracle::max_abs(literal - expanded), 1e-12) << serialize(g) << "vertex " << i;
      });
    }
  }
}

TEST(Oracle, accumulate_term_matches_kronecker_form_property) {
  Rng rng(63);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    StabilizerTerm term;
    term.alpha = static_cast<int>(rng.below(2));
    term.x_vertex = 1 + static_cast<int>(rng.below(n));
    for (Vertex j = 1; j <= n; ++j)
      if (j != term.x_vertex && rng.bernoulli(0.5)) term.z_support.push_back(j);
    const Eigen::Index dim = Eigen::Index{1} << n;
    oracle::Matrix acc = oracle::Matrix::Zero(dim, dim);
    oracle::accumulate_term(acc, term, n, 0.5);
    EXPECT_LT(oracle::max_abs(acc - 0.5 * oracle::term_matrix(term, n)), 1e-15);
  }
}

TEST(Oracle, sigma_values) {
  const VertexPair p{1, 2};
  EXPECT_LT(oracle::max_abs(oracle::sigma(2, p, 1) - oracle::identity(2)), 1e-15);
  EXPECT_LT(oracle::max_abs(oracle::sigma(2, p, 2) - oracle::on_qubit(2, 2, oracle::pauli_z())), 1e-15);
  EXPECT_LT(oracle::max_abs(oracle::sigma(2, p, 3) - oracle::on_qubit(2, 1, oracle::pauli_z())), 1e-15);
  EXPECT_LT(oracle::max_abs(oracle::sigma(2, p, 4) +
                            oracle::kron(oracle::pauli_z(), oracle::pauli_z())),
            1e-15);
  EXPECT_THROW(oracle::sigma(2, p, 0), InvalidArgument);
}

TEST(Oracle, qubit_one_is_leftmost_factor) {
  // X on qubit 1 of 2 maps |00> (index 0) to |10> (index 2).
  const oracle::Matrix x1 = oracle::on_qubit(2, 1, oracle::pauli_x());
  EXPECT_EQ(x1(2, 0), oracle::Complex(1.0));
  EXPECT_EQ(x1(1, 0), oracle::Complex(0.0));
}

TEST(Oracle, cap) {
  EXPECT_THROW(oracle::edge_unitary(Hypergraph(7, {})), CapExceeded);
  EXPECT_THROW(oracle::oracle_checks(Hypergraph(7, {})), CapExceeded);
  EXPECT_NO_THROW(oracle::edge_unitary(Hypergraph(6, {})));
}

TEST(Oracle, outcome_distribution_of_triangle_in_x) {
  const Hypergraph g(3, {Edge(1, 2, 3)});
  const auto p = oracle::outcome_distribution(oracle::density(oracle::hypergraph_state(g)), 3,
                                              {Basis::X, Basis::X, Basis::X});
  EXPECT_NEAR(p[0], 0.5625, 1e-12);
  for (std::size_t z = 1; z < p.size(); ++z) EXPECT_NEAR(p[z], 0.0625, 1e-12);
}
