#include "submatch/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <functional>

namespace submatch {

int Matching::size() const {
  int s = 0;
  for (Vertex v = 0; v < static_cast<Vertex>(mate.size()); ++v)
    if (mate[v] != kNoVertex && mate[v] > v) ++s;
  return s;
}

std::vector<Edge> Matching::edges() const {
  std::vector<Edge> out;
  for (Vertex v = 0; v < static_cast<Vertex>(mate.size()); ++v)
    if (mate[v] != kNoVertex && mate[v] > v) out.push_back(Edge{v, mate[v]});
  return out;
}

bool Matching::is_valid(const GraphAccess& g) const {
  if (static_cast<Vertex>(mate.size()) != g.size()) return false;
  for (Vertex v = 0; v < g.size(); ++v) {
    Vertex u = mate[v];
    if (u == kNoVertex) continue;
    if (u < 0 || u >= g.size() || u == v) return false;
    if (mate[u] != v) return false;
    if (!g.peek(u, v)) return false;
  }
  return true;
}

bool two_color_bipartite(const GraphAccess& g, std::vector<int>& side) {
  Vertex n = g.size();
  side.assign(n, -1);
  std::deque<Vertex> q;
  for (Vertex s = 0; s < n; ++s) {
    if (side[s] != -1) continue;
    side[s] = 0;
    q.push_back(s);
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      for (Vertex u = 0; u < n; ++u) {
        if (!g.peek(v, u)) continue;
        if (side[u] == -1) {
          side[u] = side[v] ^ 1;
          q.push_back(u);
        } else if (side[u] == side[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

namespace {

std::vector<std::vector<Vertex>> adjacency_snapshot(const GraphAccess& g) {
  Vertex n = g.size();
  std::vector<std::vector<Vertex>> adj(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (g.peek(u, v)) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
  return adj;
}

// Layered bipartite augmentation (Hopcroft-Karp). Stops once the shortest
// augmenting path exceeds max_len (max_len < 0: run to optimality).
Matching hopcroft_karp(const std::vector<std::vector<Vertex>>& adj,
                       const std::vector<int>& side, int max_len) {
  Vertex n = static_cast<Vertex>(adj.size());
  std::vector<Vertex> mate(n, kNoVertex);
  std::vector<int> dist(n);
  constexpr int kInf = 1 << 30;

  auto bfs = [&]() -> int {
    std::deque<Vertex> q;
    for (Vertex v = 0; v < n; ++v) {
      if (side[v] == 0 && mate[v] == kNoVertex) {
        dist[v] = 0;
        q.push_back(v);
      } else {
        dist[v] = kInf;
      }
    }
    int found = kInf;
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      if (dist[v] >= found) continue;
      for (Vertex u : adj[v]) {
        Vertex w = mate[u];
        if (w == kNoVertex) {
          found = std::min(found, dist[v] + 1);
        } else if (dist[w] == kInf) {
          dist[w] = dist[v] + 2;
          q.push_back(w);
        }
      }
    }
    return found;  // shortest augmenting path length in edges
  };

  std::vector<char> busy(n, 0);
  std::function<bool(Vertex)> dfs = [&](Vertex v) -> bool {
    busy[v] = 1;
    for (Vertex u : adj[v]) {
      Vertex w = mate[u];
      if (w == kNoVertex) {
        mate[u] = v;
        mate[v] = u;
        return true;
      }
      if (!busy[w] && dist[w] == dist[v] + 2 && dfs(w)) {
        mate[u] = v;
        mate[v] = u;
        return true;
      }
    }
    return false;
  };

  for (;;) {
    int shortest = bfs();
    if (shortest == kInf) break;
    if (max_len >= 0 && shortest > max_len) break;
    std::fill(busy.begin(), busy.end(), 0);
    for (Vertex v = 0; v < n; ++v)
      if (side[v] == 0 && mate[v] == kNoVertex && !busy[v]) dfs(v);
  }
  return Matching{std::move(mate)};
}

// Blossom augmentation with an optional depth cap. Depths are maintained as
// lower bounds of alternating distance, so the cap can only overshoot: paths
// of length <= max_len are never missed, found paths may be longer.
class BlossomMatcher {
 public:
  BlossomMatcher(std::vector<std::vector<Vertex>> adj, int max_len)
      : adj_(std::move(adj)),
        n_(static_cast<Vertex>(adj_.size())),
        max_len_(max_len),
        mate_(n_, kNoVertex),
        p_(n_),
        base_(n_),
        depth_(n_),
        used_(n_),
        blossom_(n_) {}

  Matching solve() {
    for (Vertex v = 0; v < n_; ++v)
      if (mate_[v] == kNoVertex) {
        Vertex u = find_path(v);
        while (u != kNoVertex) {
          Vertex pv = p_[u];
          Vertex ppv = mate_[pv];
          mate_[u] = pv;
          mate_[pv] = u;
          u = ppv;
        }
      }
    return Matching{mate_};
  }

 private:
  Vertex lca(Vertex a, Vertex b) {
    std::vector<char> seen(n_, 0);
    for (;;) {
      a = base_[a];
      seen[a] = 1;
      if (mate_[a] == kNoVertex) break;
      a = p_[mate_[a]];
    }
    for (;;) {
      b = base_[b];
      if (seen[b]) return b;
      b = p_[mate_[b]];
    }
  }

  void mark_path(Vertex v, Vertex b, Vertex child, std::vector<char>& on_blossom) {
    while (base_[v] != b) {
      on_blossom[base_[v]] = 1;
      on_blossom[base_[mate_[v]]] = 1;
      p_[v] = child;
      child = mate_[v];
      v = p_[mate_[v]];
    }
  }

  // BFS alternating tree from root; returns the free vertex closing an
  // augmenting path, or kNoVertex.
  Vertex find_path(Vertex root) {
    std::fill(used_.begin(), used_.end(), 0);
    std::fill(p_.begin(), p_.end(), kNoVertex);
    for (Vertex v = 0; v < n_; ++v) base_[v] = v;
    std::fill(depth_.begin(), depth_.end(), 0);

    used_[root] = 1;
    std::deque<Vertex> q{root};
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      bool expand = max_len_ < 0 || depth_[v] + 2 <= max_len_ - 1;
      for (Vertex to : adj_[v]) {
        if (base_[v] == base_[to] || mate_[v] == to) continue;
        if (to == root || (mate_[to] != kNoVertex && p_[mate_[to]] != kNoVertex)) {
          // odd cycle: contract the blossom at the lca
          Vertex b = lca(v, to);
          std::vector<char> on_blossom(n_, 0);
          mark_path(v, b, to, on_blossom);
          mark_path(to, b, v, on_blossom);
          for (Vertex i = 0; i < n_; ++i)
            if (on_blossom[base_[i]]) {
              base_[i] = b;
              if (!used_[i]) {
                used_[i] = 1;
                depth_[i] = depth_[b];  // lower bound keeps the cap safe
                q.push_back(i);
              }
            }
        } else if (p_[to] == kNoVertex) {
          p_[to] = v;
          if (mate_[to] == kNoVertex) {
            return to;  // augmenting path found regardless of cap
          }
          if (expand) {
            used_[mate_[to]] = 1;
            depth_[mate_[to]] = depth_[v] + 2;
            q.push_back(mate_[to]);
          } else {
            p_[to] = kNoVertex;  // pruned by the depth cap
          }
        }
      }
    }
    return kNoVertex;
  }

  std::vector<std::vector<Vertex>> adj_;
  Vertex n_;
  int max_len_;
  std::vector<Vertex> mate_, p_, base_;
  std::vector<int> depth_;
  std::vector<char> used_, blossom_;
};

}  // namespace

Matching bounded_augmentation_matching(const GraphAccess& g, int max_len) {
  auto adj = adjacency_snapshot(g);
  std::vector<int> side;
  if (two_color_bipartite(g, side)) return hopcroft_karp(adj, side, max_len);
  return BlossomMatcher(std::move(adj), max_len).solve();
}

Matching max_matching_exact(const GraphAccess& g, Vertex size_cap) {
  if (g.size() > size_cap)
    throw SizeCapExceeded("exact matching: n=" + std::to_string(g.size()) +
                          " exceeds cap " + std::to_string(size_cap));
  return bounded_augmentation_matching(g, -1);
}

int mu_exact(const GraphAccess& g, Vertex size_cap) {
  return max_matching_exact(g, size_cap).size();
}

int mu_exhaustive(const GraphAccess& g) {
  Vertex n = g.size();
  if (n > 24) throw SizeCapExceeded("mu_exhaustive: n > 24");
  std::vector<std::uint32_t> nbr(n, 0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v && g.peek(u, v)) nbr[u] |= (1u << v);
  std::vector<std::int8_t> memo(std::size_t(1) << n, -1);
  std::function<int(std::uint32_t)> rec = [&](std::uint32_t s) -> int {
    if (s == 0) return 0;
    if (memo[s] >= 0) return memo[s];
    int v = std::countr_zero(s);
    int best = rec(s & ~(1u << v));  // leave v unmatched
    std::uint32_t cand = nbr[v] & s;
    while (cand) {
      int u = std::countr_zero(cand);
      cand &= cand - 1;
      best = std::max(best, 1 + rec(s & ~(1u << v) & ~(1u << u)));
    }
    memo[s] = static_cast<std::int8_t>(best);
    return best;
  };
  return rec((1u << n) - 1);
}

Matching static_approx_matching(const GraphAccess& g, double eps) {
  if (eps <= 0) throw InvalidParameter("static_approx_matching: eps <= 0");
  int max_len = 2 * static_cast<int>(std::ceil(1.0 / eps)) - 1;
  return bounded_augmentation_matching(g, max_len);
}

Matching gmm_reference(const GraphAccess& g, const EdgePermutation& pi) {
  Vertex n = g.size();
  std::vector<std::pair<EdgePermutation::Rank, Edge>> order;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (g.peek(u, v)) order.push_back({pi.rank(u, v), Edge{u, v}});
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Vertex> mate(n, kNoVertex);
  for (const auto& [rank, e] : order)
    if (mate[e.u] == kNoVertex && mate[e.v] == kNoVertex) {
      mate[e.u] = e.v;
      mate[e.v] = e.u;
    }
  return Matching{std::move(mate)};
}

namespace {

// Backtracking search for one alternating path of exactly `edges_left` more
// edges from v (v reached on a matched edge), ending at a free vertex.
bool aug_path_dfs(const std::vector<std::vector<Vertex>>& adj,
                  const std::vector<Vertex>& mate, std::vector<char>& used,
                  std::vector<Vertex>& path, Vertex v, int edges_left,
                  std::int64_t& steps) {
  if (--steps < 0) return false;
  if (edges_left == 1) {
    for (Vertex w : adj[v]) {
      if (used[w] || mate[w] != kNoVertex || mate[v] == w) continue;
      path.push_back(w);
      return true;
    }
    return false;
  }
  for (Vertex w : adj[v]) {
    if (used[w] || w == mate[v] || mate[w] == kNoVertex) continue;
    Vertex m = mate[w];
    if (used[m]) continue;
    used[w] = used[m] = 1;
    path.push_back(w);
    path.push_back(m);
    if (aug_path_dfs(adj, mate, used, path, m, edges_left - 2, steps)) return true;
    path.pop_back();
    path.pop_back();
    used[w] = used[m] = 0;
  }
  return false;
}

}  // namespace

int count_disjoint_short_aug_paths(const GraphAccess& g,
                                   const std::vector<Vertex>& mate, int k) {
  Vertex n = g.size();
  auto adj = adjacency_snapshot(g);
  std::vector<char> used(n, 0);
  int count = 0;
  int len = 2 * k + 1;
  for (Vertex v = 0; v < n; ++v) {
    if (used[v] || mate[v] != kNoVertex) continue;
    std::vector<Vertex> path{v};
    used[v] = 1;
    std::int64_t steps = 2'000'000;
    bool ok;
    if (len == 1) {
      ok = false;
      for (Vertex w : adj[v])
        if (!used[w] && mate[w] == kNoVertex) {
          path.push_back(w);
          ok = true;
          break;
        }
    } else {
      ok = aug_path_dfs(adj, mate, used, path, v, len, steps);
    }
    if (ok) {
      for (Vertex x : path) used[x] = 1;
      ++count;
    } else {
      used[v] = 0;
    }
  }
  return count;
}

}  // namespace submatch
