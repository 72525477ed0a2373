#pragma once

#include <vector>

#include "submatch/graph.hpp"

namespace submatch {

/// Explicit matching with a per-vertex mate certificate.
struct Matching {
  std::vector<Vertex> mate;  // kNoVertex when unmatched

  int size() const;
  std::vector<Edge> edges() const;
  bool is_valid(const GraphAccess& g) const;
};

/// Maximum matching: bipartite fast path (layered augmentation), blossom
/// augmentation otherwise. Reads the graph via peek (uncounted).
Matching max_matching_exact(const GraphAccess& g, Vertex size_cap = 4096);

/// Maximum matching size. Convenience wrapper.
int mu_exact(const GraphAccess& g, Vertex size_cap = 4096);

/// Brute-force maximum matching size by subset DP; n <= 24.
int mu_exhaustive(const GraphAccess& g);

/// Matching with no remaining augmenting path of length <= max_len.
/// max_len < 0 means unbounded (exact).
Matching bounded_augmentation_matching(const GraphAccess& g, int max_len);

/// (1+eps)-approximate matching: eliminates augmenting paths of length
/// <= 2*ceil(1/eps)-1 by depth-bounded augmentation.
Matching static_approx_matching(const GraphAccess& g, double eps);

/// Greedy maximal matching scanning all edges in permutation-rank order.
Matching gmm_reference(const GraphAccess& g, const EdgePermutation& pi);

/// Greedy-maximal collection of node-disjoint length-(2k+1) augmenting paths
/// w.r.t. the matching given by `mate`. Lower-bounds the maximum collection.
int count_disjoint_short_aug_paths(const GraphAccess& g,
                                   const std::vector<Vertex>& mate, int k);

bool two_color_bipartite(const GraphAccess& g, std::vector<int>& side);

}  // namespace submatch
