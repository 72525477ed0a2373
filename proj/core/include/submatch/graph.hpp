#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "submatch/errors.hpp"

namespace submatch {

using Vertex = std::int32_t;
using Rng = std::mt19937_64;

constexpr Vertex kNoVertex = -1;

/// Unordered vertex pair, stored with u < v.
struct Edge {
  Vertex u = kNoVertex;
  Vertex v = kNoVertex;
  auto operator<=>(const Edge&) const = default;
};

inline Edge make_edge(Vertex a, Vertex b) {
  if (a == b) throw SelfLoopError("self loop (" + std::to_string(a) + ")");
  return a < b ? Edge{a, b} : Edge{b, a};
}

/// A matching-oracle answer: the matched edge, or nullopt for "unmatched".
using MatchAnswer = std::optional<Edge>;

/// Generic session budget (adjacency probes, recursion steps, ...).
/// `used` never passes `limit`; a failed charge leaves the budget intact.
class ProbeBudget {
 public:
  explicit ProbeBudget(std::uint64_t limit = kUnlimited) : limit_(limit) {}
  static constexpr std::uint64_t kUnlimited =
      std::numeric_limits<std::uint64_t>::max();

  bool try_charge(std::uint64_t k = 1) {
    if (k > limit_ - used_) return false;
    used_ += k;
    return true;
  }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

/// Adjacency-matrix query access. `edge` is the only counted way to look at
/// the graph; `peek` reads the same bit without charging the probe counter
/// and exists for ground-truth verification only.
class GraphAccess {
 public:
  virtual ~GraphAccess() = default;
  virtual Vertex size() const = 0;
  virtual bool edge(Vertex u, Vertex v) const = 0;
  virtual bool peek(Vertex u, Vertex v) const = 0;
  virtual std::uint64_t probe_count() const = 0;

 protected:
  void check_vertex(Vertex v) const {
    if (v < 0 || v >= size())
      throw InvalidVertex("vertex " + std::to_string(v) + " out of range");
  }
};

/// Dense symmetric boolean adjacency with per-instance probe counters.
class QueryGraph final : public GraphAccess {
 public:
  explicit QueryGraph(Vertex n);

  Vertex size() const override { return n_; }

  /// One adjacency probe; increments probe_count by exactly 1.
  bool edge(Vertex u, Vertex v) const override;

  /// Uncounted read (verification/test use only).
  bool peek(Vertex u, Vertex v) const override;

  std::uint64_t probe_count() const override { return probes_; }
  std::uint64_t membership_count() const { return membership_calls_; }
  void note_membership_call() const { ++membership_calls_; }

  /// Direct bit write; construction path, not a query.
  void set_edge(Vertex u, Vertex v, bool present);

  /// All neighbors of v, found by probing the whole matrix row: costs
  /// exactly n probes. Returns nullopt when the budget cannot cover them.
  std::optional<std::vector<Vertex>> neighbors_via_matrix(
      Vertex v, ProbeBudget* budget = nullptr) const;

 private:
  std::size_t bit_index(Vertex u, Vertex v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(v);
  }
  bool get_bit(Vertex u, Vertex v) const {
    std::size_t i = bit_index(u, v);
    return (bits_[i >> 6] >> (i & 63)) & 1u;
  }

  Vertex n_;
  std::vector<std::uint64_t> bits_;
  mutable std::uint64_t probes_ = 0;
  mutable std::uint64_t membership_calls_ = 0;
};

enum class UpdateOp : char { Insert = '+', Delete = '-' };

struct Update {
  UpdateOp op;
  Vertex u, v;
};

/// QueryGraph under edge insertions/deletions, with a replayable log.
class DynamicGraph {
 public:
  explicit DynamicGraph(Vertex n) : g_(n) {}

  const QueryGraph& graph() const { return g_; }
  Vertex size() const { return g_.size(); }
  std::uint64_t edge_count() const { return m_; }
  const std::vector<Update>& update_log() const { return log_; }

  void apply(UpdateOp op, Vertex u, Vertex v);
  void apply(const Update& up) { apply(up.op, up.u, up.v); }

 private:
  QueryGraph g_;
  std::uint64_t m_ = 0;
  std::vector<Update> log_;
};

/// Implicit random permutation over unordered vertex pairs. The rank is a
/// seeded hash of the pair with the pair itself as lexicographic tie-break,
/// so it is a strict total order and never materialized.
class EdgePermutation {
 public:
  explicit EdgePermutation(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

  struct Rank {
    std::uint64_t key;
    Vertex a, b;  // canonical a < b
    auto operator<=>(const Rank&) const = default;
  };

  Rank rank(Vertex u, Vertex v) const {
    if (u == v) throw SelfLoopError("edge rank of a self loop");
    Vertex a = u < v ? u : v;
    Vertex b = u < v ? v : u;
    return Rank{mix(a, b), a, b};
  }

 private:
  std::uint64_t mix(Vertex a, Vertex b) const {
    std::uint64_t x = seed_;
    x ^= (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
};

/// Uniform draw from [0, n).
inline std::uint64_t rand_below(Rng& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

}  // namespace submatch
