#pragma once

#include <memory>
#include <vector>

#include "submatch/induced.hpp"

namespace submatch {

/// Per-vertex oracle for one fixed matching.
class MatchHandle {
 public:
  virtual ~MatchHandle() = default;
  virtual MatchAnswer query(Vertex v) const = 0;

  Vertex mate(Vertex v) const {
    MatchAnswer a = query(v);
    if (!a) return kNoVertex;
    return a->u == v ? a->v : a->u;
  }
};
using MatchHandlePtr = std::shared_ptr<const MatchHandle>;

class EmptyMatch final : public MatchHandle {
 public:
  MatchAnswer query(Vertex) const override { return std::nullopt; }
};

class ExplicitMatch final : public MatchHandle {
 public:
  explicit ExplicitMatch(std::vector<Vertex> mate) : mate_(std::move(mate)) {}
  MatchAnswer query(Vertex v) const override {
    Vertex u = mate_[v];
    return u == kNoVertex ? MatchAnswer{} : MatchAnswer{make_edge(v, u)};
  }

 private:
  std::vector<Vertex> mate_;
};

/// Wraps a preprocessing state (and whatever graph view it was built over).
class PrepStateMatch final : public MatchHandle {
 public:
  PrepStateMatch(PrepState st, std::shared_ptr<const GraphAccess> view)
      : st_(std::move(st)), view_(std::move(view)) {}
  MatchAnswer query(Vertex v) const override { return st_.query(v); }
  const PrepState& state() const { return st_; }

 private:
  PrepState st_;
  std::shared_ptr<const GraphAccess> view_;
};

/// Boost-schedule parameters: path half-length k, density gamma, the
/// psi/delta ladders of Eq.(1) and the query-exponent schedule of Eq.(2).
struct BoostSchedule {
  int k = 0;
  double gamma = 0;
  double eps_in = 0;
  Preset preset = Preset::Desk;
  double psi = 0;
  std::vector<double> psi_i;    // size bar per active level
  std::vector<double> delta_i;  // largematch promise per level
  int iteration_cap = 0;
  double eps_cap = 0.2;  // desk: eps_t growth saturates here
  double log_base = 2.0;

  static BoostSchedule make(int k, double gamma, double eps_in, Preset preset,
                            double psi_override = 0);

  /// eps_0 = eps_in, eps_t = 9 * eps_{t-1} (desk: saturating at eps_cap).
  double eps_t(int t) const;
};

/// Uniform independent layer per vertex, in [0, 2k+1].
struct LayerAssignment {
  std::uint64_t seed = 0;
  int num_layers = 0;
  std::vector<std::int16_t> layer;

  static LayerAssignment sample(Vertex n, int k, std::uint64_t seed);
  int operator()(Vertex v) const { return layer[v]; }
};

/// Adjacency restricted to edges between layers (even_layer, even_layer+1).
/// Layer mismatches answer false without charging a probe.
class LayerFilteredView final : public GraphAccess {
 public:
  LayerFilteredView(const GraphAccess& g,
                    std::shared_ptr<const LayerAssignment> layers,
                    int even_layer)
      : g_(&g), layers_(std::move(layers)), lo_(even_layer) {}

  Vertex size() const override { return g_->size(); }
  bool edge(Vertex u, Vertex v) const override {
    return cross(u, v) && g_->edge(u, v);
  }
  bool peek(Vertex u, Vertex v) const override {
    return cross(u, v) && g_->peek(u, v);
  }
  std::uint64_t probe_count() const override { return g_->probe_count(); }

 private:
  bool cross(Vertex u, Vertex v) const {
    int a = (*layers_)(u), b = (*layers_)(v);
    if (a > b) std::swap(a, b);
    return a == lo_ && b == lo_ + 1;
  }
  const GraphAccess* g_;
  std::shared_ptr<const LayerAssignment> layers_;
  int lo_;
};

/// largematch(S, delta): a matching in G[S] behind an oracle, or bottom.
class LargeMatchBackend {
 public:
  virtual ~LargeMatchBackend() = default;
  struct Result {
    bool bottom = true;
    MatchHandlePtr handle;
  };
  virtual Result large_match(std::shared_ptr<const GraphAccess> layered,
                             std::function<bool(Vertex)> member,
                             std::uint64_t* membership_counter, double delta,
                             double eps, Rng& rng) = 0;
};

/// The sublinear implementation: induced-oracle preprocessing per call.
class OracleBackend final : public LargeMatchBackend {
 public:
  explicit OracleBackend(Preset preset) : preset_(preset) {}
  Result large_match(std::shared_ptr<const GraphAccess> layered,
                     std::function<bool(Vertex)> member,
                     std::uint64_t* membership_counter, double delta,
                     double eps, Rng& rng) override;

 private:
  Preset preset_;
};

/// Differential-test stub: exact maximum matching of G[S], bottom iff
/// mu(G[S]) < delta * n. Reads the graph uncounted.
class ExplicitBackend final : public LargeMatchBackend {
 public:
  Result large_match(std::shared_ptr<const GraphAccess> layered,
                     std::function<bool(Vertex)> member,
                     std::uint64_t* membership_counter, double delta,
                     double eps, Rng& rng) override;
};

struct AugmentStats {
  int iterations = 0;
  int forwards = 0;
  int backtracks = 0;
  std::vector<int> backtracks_per_level;
  std::uint64_t membership_calls = 0;
};

struct AugmentResult {
  bool success = false;
  MatchHandlePtr match_out;  // set on success
  double eps_out = 0;
  AugmentStats stats;
};

/// One Augment invocation: random layer partition, then the template loop
/// of forwarding/backtracking iterations over nested matchings.
class Augmenter {
 public:
  Augmenter(const GraphAccess& g, MatchHandlePtr match_in, BoostSchedule sched,
            LargeMatchBackend& backend, std::uint64_t seed);

  /// Replace the sampled layer assignment (tests).
  void override_layers(LayerAssignment la);

  AugmentResult run();

  // State probes (tests): valid during and after run().
  bool relevant(Vertex v) const;
  bool alive_now(Vertex v) const;
  bool candidate(Vertex v) const;
  int stack_level() const;
  const LayerAssignment& layers() const;
  const std::vector<MatchHandlePtr>& active_oracles() const { return lambda_; }
  const AugmentStats& stats() const { return stats_; }

  struct Core;  // shared template state; owned by handles that outlive us

 private:
  std::shared_ptr<Core> core_;
  std::vector<MatchHandlePtr> lambda_;
  LargeMatchBackend* backend_;
  Rng rng_;
  AugmentStats stats_;
  bool finished_ = false;
};

AugmentResult augment(const GraphAccess& g, MatchHandlePtr match_in, int k,
                      double gamma, double eps_in, Preset preset,
                      LargeMatchBackend& backend, std::uint64_t seed);

}  // namespace submatch
