#include "hgv/hypergraph.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "test_support.hpp"

using namespace hgv;

TEST(Hypergraph, parse_basic) {
  const Hypergraph g = parse_hypergraph("3\n1 2\n1 2 3\n");
  EXPECT_EQ(g.n(), 3);
  ASSERT_EQ(g.edges().size(), 2u);
  EXPECT_EQ(g.edges()[0], Edge(1, 2));
  EXPECT_EQ(g.edges()[1], Edge(1, 2, 3));
}

TEST(Hypergraph, parse_single_vertex) {
  const Hypergraph g = parse_hypergraph("1\n");
  EXPECT_EQ(g.n(), 1);
  EXPECT_TRUE(g.edges().empty());
}

TEST(Hypergraph, parse_skips_comments_and_blank_lines) {
  const Hypergraph g = parse_hypergraph("# header\n\n4\n  # edge list\n3 1 2\n\n4   2\n");
  EXPECT_EQ(g, Hypergraph(4, {Edge(1, 2, 3), Edge(2, 4)}));
}

namespace {

ParseError parse_failure(std::string_view text) {
  try {
    parse_hypergraph(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a parse error for: " << text;
  return ParseError(ParseErrorKind::kMissingHeader, 0, "");
}

}  // namespace

TEST(Hypergraph, duplicate_edge_after_canonicalization) {
  const ParseError e = parse_failure("3\n1 2\n2 1\n");
  EXPECT_EQ(e.kind(), ParseErrorKind::kDuplicateEdge);
  EXPECT_EQ(e.line(), 3u);
}

TEST(Hypergraph, parse_error_kinds) {
  EXPECT_EQ(parse_failure("3\n1 x\n").kind(), ParseErrorKind::kMalformedLine);
  EXPECT_EQ(parse_failure("3\n1 4\n").kind(), ParseErrorKind::kVertexOutOfRange);
  EXPECT_EQ(parse_failure("3\n0 1\n").kind(), ParseErrorKind::kVertexOutOfRange);
  EXPECT_EQ(parse_failure("4\n1\n").kind(), ParseErrorKind::kBadCardinality);
  EXPECT_EQ(parse_failure("4\n1 2 3 4\n").kind(), ParseErrorKind::kBadCardinality);
  EXPECT_EQ(parse_failure("3\n1 1\n").kind(), ParseErrorKind::kMalformedLine);
  EXPECT_EQ(parse_failure("# nothing\n").kind(), ParseErrorKind::kMissingHeader);
  EXPECT_EQ(parse_failure("0\n").kind(), ParseErrorKind::kMalformedLine);

  const ParseError e = parse_failure("5\n1 2\n\n# c\n2 3 9\n");
  EXPECT_EQ(e.line(), 5u);
  EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
}

TEST(Hypergraph, constructor_validates) {
  EXPECT_THROW(Hypergraph(2, {Edge(1, 3)}), RangeError);
  EXPECT_THROW(Hypergraph(3, {Edge(1, 2), Edge(2, 1)}), InvalidArgument);
  EXPECT_THROW(Hypergraph(0, {}), InvalidArgument);
}

TEST(Hypergraph, serialize_is_canonical) {
  const Hypergraph g(4, {Edge(4, 2, 3), Edge(3, 1)});
  EXPECT_EQ(serialize(g), "4\n1 3\n2 3 4\n");
}

TEST(Hypergraph, parse_serialize_roundtrip_property) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Hypergraph g = fixtures::random_hypergraph(rng, 1 + static_cast<int>(rng.below(7)));
    const std::string text = serialize(g);
    EXPECT_EQ(parse_hypergraph(text), g);
    EXPECT_EQ(serialize(parse_hypergraph(text)), text);
  }
}

TEST(Neighborhood, examples) {
  const Hypergraph g3(3, {Edge(1, 2), Edge(1, 2, 3)});
  Neighborhood nb = neighborhood(g3, 1);
  EXPECT_EQ(nb.z_neighbors, (std::vector<Vertex>{2}));
  EXPECT_EQ(nb.cz_neighbors, (std::vector<VertexPair>{{2, 3}}));
  EXPECT_EQ(nb.r(), 1);

  nb = neighborhood(Hypergraph(2, {Edge(1, 2)}), 2);
  EXPECT_EQ(nb.z_neighbors, (std::vector<Vertex>{1}));
  EXPECT_TRUE(nb.cz_neighbors.empty());
  EXPECT_EQ(nb.r(), 0);

  nb = neighborhood(Hypergraph(4, {Edge(1, 2, 3), Edge(1, 2, 4)}), 1);
  EXPECT_TRUE(nb.z_neighbors.empty());
  EXPECT_EQ(nb.cz_neighbors, (std::vector<VertexPair>{{2, 3}, {2, 4}}));
  EXPECT_EQ(nb.r(), 2);
}

TEST(Neighborhood, vertex_out_of_range) {
  const Hypergraph g(2, {Edge(1, 2)});
  EXPECT_THROW(neighborhood(g, 0), RangeError);
  EXPECT_THROW(neighborhood(g, 3), RangeError);
}

TEST(Neighborhood, invariants_property) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const Hypergraph g = fixtures::random_hypergraph(rng, n, 0.5, 0.5);
    for (Vertex i = 1; i <= n; ++i) {
      const Neighborhood nb = neighborhood(g, i);
      EXPECT_LE(nb.r(), (n - 1) * (n - 2) / 2);
      EXPECT_EQ(std::count(nb.z_neighbors.begin(), nb.z_neighbors.end(), i), 0);
      for (const VertexPair& p : nb.cz_neighbors) {
        EXPECT_LT(p.j, p.k);
        EXPECT_NE(p.j, i);
        EXPECT_NE(p.k, i);
      }
    }
  }
}

TEST(Neighborhood, relabeling_equivariance_property) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(6));
    const Hypergraph g = fixtures::random_hypergraph(rng, n);
    const std::vector<Vertex> perm = fixtures::random_permutation(rng, n);
    const Hypergraph h = relabel(g, perm);
    for (Vertex i = 1; i <= n; ++i) {
      const Neighborhood a = neighborhood(g, i);
      Neighborhood mapped;
      mapped.vertex = perm[i - 1];
      for (Vertex j : a.z_neighbors) mapped.z_neighbors.push_back(perm[j - 1]);
      for (const VertexPair& p : a.cz_neighbors) {
        const Vertex x = perm[p.j - 1], y = perm[p.k - 1];
        mapped.cz_neighbors.push_back({std::min(x, y), std::max(x, y)});
      }
      std::sort(mapped.z_neighbors.begin(), mapped.z_neighbors.end());
      std::sort(mapped.cz_neighbors.begin(), mapped.cz_neighbors.end());
      EXPECT_EQ(neighborhood(h, perm[i - 1]), mapped);
    }
  }
}
