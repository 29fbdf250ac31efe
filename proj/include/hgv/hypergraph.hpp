#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hgv/errors.hpp"

namespace hgv {

/// 1-based vertex label. Vertex v lives on bit (n - v) of a basis index, so
/// vertex 1 is the most significant bit.
using Vertex = int;

/// A hyperedge of cardinality 2 or 3, stored strictly increasing.
class Edge {
 public:
  Edge(Vertex a, Vertex b) : size_(2), v_{a, b, 0} { canonicalize(); }
  Edge(Vertex a, Vertex b, Vertex c) : size_(3), v_{a, b, c} { canonicalize(); }

  static Edge from(const std::vector<Vertex>& vs) {
    if (vs.size() == 2) return Edge(vs[0], vs[1]);
    if (vs.size() == 3) return Edge(vs[0], vs[1], vs[2]);
    throw InvalidArgument("edge cardinality must be 2 or 3, got " + std::to_string(vs.size()));
  }

  int size() const noexcept { return size_; }
  Vertex operator[](int i) const noexcept { return v_[i]; }
  const Vertex* begin() const noexcept { return v_; }
  const Vertex* end() const noexcept { return v_ + size_; }
  bool contains(Vertex x) const noexcept { return std::find(begin(), end(), x) != end(); }

  bool has_repeated_vertex() const noexcept {
    for (int i = 1; i < size_; ++i)
      if (v_[i - 1] == v_[i]) return true;
    return false;
  }

  friend bool operator==(const Edge& a, const Edge& b) noexcept {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
  friend bool operator<(const Edge& a, const Edge& b) noexcept {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }

 private:
  void canonicalize() noexcept { std::sort(v_, v_ + size_); }

  int size_;
  Vertex v_[3];
};

struct VertexPair {
  Vertex j;
  Vertex k;

  friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

/// W_i^Z and W_i^CZ of one vertex.
struct Neighborhood {
  Vertex vertex = 0;
  std::vector<Vertex> z_neighbors;       // sorted ascending
  std::vector<VertexPair> cz_neighbors;  // sorted, each with j < k

  /// Number of CZ factors in the stabilizer of this vertex.
  int r() const noexcept { return static_cast<int>(cz_neighbors.size()); }

  friend bool operator==(const Neighborhood&, const Neighborhood&) = default;
};

/// Vertex count plus a set of 2- and 3-vertex hyperedges. Immutable.
class Hypergraph {
 public:
  Hypergraph() = default;

  /// Validates and canonicalizes. Throws RangeError or InvalidArgument.
  Hypergraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 1) throw InvalidArgument("hypergraph needs at least one vertex");
    for (const Edge& e : edges_) {
      for (Vertex v : e)
        if (v < 1 || v > n_)
          throw RangeError("vertex " + std::to_string(v) + " outside [1, " + std::to_string(n_) +
                           "]");
      if (e.has_repeated_vertex()) throw InvalidArgument("edge repeats a vertex");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw InvalidArgument("duplicate hyperedge");
  }

  int n() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

inline void check_vertex(const Hypergraph& g, Vertex i) {
  if (i < 1 || i > g.n())
    throw RangeError("vertex " + std::to_string(i) + " outside [1, " + std::to_string(g.n()) + "]");
}

inline Neighborhood neighborhood(const Hypergraph& g, Vertex i) {
  check_vertex(g, i);
  Neighborhood nb;
  nb.vertex = i;
  for (const Edge& e : g.edges()) {
    if (!e.contains(i)) continue;
    if (e.size() == 2) {
      nb.z_neighbors.push_back(e[0] == i ? e[1] : e[0]);
    } else {
      Vertex rest[2];
      int w = 0;
      for (Vertex v : e)
        if (v != i) rest[w++] = v;
      nb.cz_neighbors.push_back({rest[0], rest[1]});
    }
  }
  std::sort(nb.z_neighbors.begin(), nb.z_neighbors.end());
  std::sort(nb.cz_neighbors.begin(), nb.cz_neighbors.end());
  return nb;
}

inline int max_r(const Hypergraph& g) {
  int r = 0;
  for (Vertex i = 1; i <= g.n(); ++i) r = std::max(r, neighborhood(g, i).r());
  return r;
}

/// Relabels vertex v as perm[v - 1]. perm must be a permutation of [1, n].
inline Hypergraph relabel(const Hypergraph& g, const std::vector<Vertex>& perm) {
  if (static_cast<int>(perm.size()) != g.n()) throw DimensionMismatch("permutation size");
  std::vector<Edge> edges;
  edges.reserve(g.edges().size());
  for (const Edge& e : g.edges()) {
    std::vector<Vertex> vs;
    for (Vertex v : e) vs.push_back(perm[v - 1]);
    edges.push_back(Edge::from(vs));
  }
  return Hypergraph(g.n(), std::move(edges));
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

/// Splits on whitespace and parses each token as an int; false on junk.
inline bool parse_ints(std::string_view line, std::vector<long long>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    long long value = 0;
    const char* first = line.data() + pos;
    const char* last = line.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) return false;
    out.push_back(value);
    pos = end;
  }
  return true;
}

}  // namespace detail

/// Reads the text format: first content line is n, each later line one edge.
/// Blank lines and lines starting with '#' are skipped.
inline Hypergraph parse_hypergraph(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  long long n = -1;
  std::vector<Edge> edges;
  std::set<Edge> seen;
  std::vector<long long> ints;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!detail::parse_ints(line, ints) || ints.empty())
      throw ParseError(ParseErrorKind::kMalformedLine, line_no, std::string(line));

    if (n < 0) {
      if (ints.size() != 1 || ints[0] < 1)
        throw ParseError(ParseErrorKind::kMalformedLine, line_no,
                         "expected a single positive vertex count");
      if (ints[0] > 1'000'000)
        throw ParseError(ParseErrorKind::kMalformedLine, line_no, "vertex count too large");
      n = ints[0];
      continue;
    }

    if (ints.size() != 2 && ints.size() != 3)
      throw ParseError(ParseErrorKind::kBadCardinality, line_no,
                       "got " + std::to_string(ints.size()) + " vertices");
    std::vector<Vertex> vs;
    for (long long v : ints) {
      if (v < 1 || v > n)
        throw ParseError(ParseErrorKind::kVertexOutOfRange, line_no,
                         std::to_string(v) + " not in [1, " + std::to_string(n) + "]");
      vs.push_back(static_cast<Vertex>(v));
    }
    const Edge e = Edge::from(vs);
    if (e.has_repeated_vertex())
      throw ParseError(ParseErrorKind::kMalformedLine, line_no, "edge repeats a vertex");
    if (!seen.insert(e).second)
      throw ParseError(ParseErrorKind::kDuplicateEdge, line_no, std::string(line));
    edges.push_back(e);
  }
  if (n < 0) throw ParseError(ParseErrorKind::kMissingHeader, line_no, "");
  return Hypergraph(static_cast<int>(n), std::move(edges));
}

inline Hypergraph parse_hypergraph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_hypergraph(in);
}

/// Canonical text form: n, then edges in sorted order.
inline void serialize(const Hypergraph& g, std::ostream& out) {
  out << g.n() << '\n';
  for (const Edge& e : g.edges()) {
    for (int i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << '\n';
  }
}

inline std::string serialize(const Hypergraph& g) {
  std::ostringstream out;
  serialize(g, out);
  return out.str();
}

}  // namespace hgv
