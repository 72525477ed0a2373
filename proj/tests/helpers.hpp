#pragma once

#include <initializer_list>
#include <vector>

#include "submatch/exact.hpp"
#include "submatch/graph.hpp"

namespace submatch::test {

inline QueryGraph graph_from_edges(Vertex n,
                                   std::initializer_list<std::pair<int, int>> edges) {
  QueryGraph g(n);
  for (auto [u, v] : edges) g.set_edge(u, v, true);
  return g;
}

inline QueryGraph random_graph(Vertex n, double p, Rng& rng) {
  QueryGraph g(n);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (coin(rng) < p) g.set_edge(u, v, true);
  return g;
}

inline QueryGraph petersen() {
  // outer 5-cycle, inner 5-star polygon, spokes
  QueryGraph g(10);
  for (int i = 0; i < 5; ++i) {
    g.set_edge(i, (i + 1) % 5, true);
    g.set_edge(5 + i, 5 + (i + 2) % 5, true);
    g.set_edge(i, 5 + i, true);
  }
  return g;
}

inline QueryGraph path_graph(Vertex n) {
  QueryGraph g(n);
  for (Vertex v = 0; v + 1 < n; ++v) g.set_edge(v, v + 1, true);
  return g;
}

/// Seed whose permutation ranks the triangle edges (0,1) < (1,2) < (0,2).
inline std::uint64_t triangle_seed() {
  for (std::uint64_t s = 0;; ++s) {
    EdgePermutation pi(s);
    if (pi.rank(0, 1) < pi.rank(1, 2) && pi.rank(1, 2) < pi.rank(0, 2))
      return s;
  }
}

}  // namespace submatch::test
