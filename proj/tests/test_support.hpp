#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "hgv/hypergraph.hpp"
#include "hgv/rng.hpp"
#include "hgv/statevector.hpp"

namespace hgv::fixtures {

/// Each possible 2-edge present w.p. p2, each 3-edge w.p. p3.
inline Hypergraph random_hypergraph(Rng& rng, int n, double p2 = 0.4, double p3 = 0.3) {
  std::vector<Edge> edges;
  for (Vertex a = 1; a <= n; ++a)
    for (Vertex b = a + 1; b <= n; ++b) {
      if (rng.bernoulli(p2)) edges.emplace_back(a, b);
      for (Vertex c = b + 1; c <= n; ++c)
        if (rng.bernoulli(p3)) edges.emplace_back(a, b, c);
    }
  return Hypergraph(n, std::move(edges));
}

inline std::vector<Vertex> random_permutation(Rng& rng, int n) {
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  for (int i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  return perm;
}

/// Haar-ish random state from normalized complex Gaussians (Box-Muller).
inline StateVector random_state(Rng& rng, int n) {
  std::vector<Amplitude> amps(std::size_t{1} << n);
  for (auto& a : amps) {
    const double u1 = 1.0 - rng.uniform01();
    const double u2 = rng.uniform01();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    a = {rad * std::cos(2 * M_PI * u2), rad * std::sin(2 * M_PI * u2)};
  }
  StateVector s = StateVector::from_amplitudes(std::move(amps));
  s.normalize();
  return s;
}

/// Pearson statistic with cells pooled until every expected count is >= 5.
struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
};

inline ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& expected) {
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double obs = 0.0, exp = 0.0;
  for (std::size_t c = 0; c < observed.size(); ++c) {
    obs += observed[c];
    exp += expected[c];
    if (exp >= 5.0) {
      cells.push_back({obs, exp});
      obs = exp = 0.0;
    }
  }
  if (exp > 0.0 || obs > 0.0) {
    if (cells.empty()) cells.push_back({0.0, 0.0});
    cells.back().first += obs;
    cells.back().second += exp;
  }
  ChiSquare out;
  for (const auto& [o, e] : cells) out.statistic += (o - e) * (o - e) / e;
  out.dof = std::max(1, static_cast<int>(cells.size()) - 1);
  return out;
}

inline double chi_square_critical(int dof, double alpha) {
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

inline std::string graph_path(const std::string& name) { return std::string(HGV_GRAPHS_DIR) + "/" + name; }

}  // namespace hgv::fixtures
