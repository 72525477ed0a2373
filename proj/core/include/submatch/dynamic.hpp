#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <unordered_map>

#include "submatch/near_optimal.hpp"

namespace submatch {

struct DynamicParams {
  double eps = 0.2;
  Preset preset = Preset::Desk;
  double eps0 = 0;        // phase-length exponent slack; 0 means eps/10
  double alpha = 3.0;     // guess base
  double c_vphi = 2.0;    // |V_phi| = ceil(c_vphi * alpha^{i+1} / eps); paper 8
  double c_contr = 0.1;   // contractions per guess: ceil(c_contr*ln(n)/eps^2); paper 512
  int probe_contractions = 3;  // contractions solved at a type-II phase start
  int k_cap = 2;               // near-optimal path cap inside type II; paper -1
  double gamma_dyn = 0;        // type-II oracle gamma; 0 means eps^2
  bool deamortized = false;
  std::uint64_t work_budget = 0;  // per update, deamortized mode; 0: auto
  std::uint64_t seed = 1;

  static DynamicParams make(double eps, Preset preset);
  double eps0_value() const { return eps0 > 0 ? eps0 : eps / 10.0; }
  double gamma_value() const { return gamma_dyn > 0 ? gamma_dyn : eps * eps; }
};

/// One random vertex contraction phi : V -> V_phi with multiplicity counts
/// of the contracted multigraph. Self-loops (phi(u) == phi(v)) are dropped.
class Contraction {
 public:
  Contraction(Vertex n, Vertex vphi, Rng& rng);

  void apply(UpdateOp op, Vertex u, Vertex v);
  Vertex phi(Vertex v) const { return phi_[v]; }
  Vertex contracted_size() const { return vphi_; }
  std::int64_t multiplicity(Vertex a, Vertex b) const;
  const std::unordered_map<std::uint64_t, std::int32_t>& edges() const {
    return mult_;
  }
  std::vector<std::vector<Vertex>> preimages() const;

  /// Booleanized snapshot of the contracted multigraph.
  QueryGraph snapshot() const;

 private:
  std::uint64_t key(Vertex a, Vertex b) const {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) * vphi_ + b;
  }
  Vertex vphi_;
  std::vector<Vertex> phi_;
  std::unordered_map<std::uint64_t, std::int32_t> mult_;
};

/// Appendix-B family: per guess alpha^i, a block of independent
/// contractions, all maintained under every update.
class ContractionSet {
 public:
  ContractionSet(Vertex n, const DynamicParams& params, Rng& rng);

  void apply(UpdateOp op, Vertex u, Vertex v);
  int guess_count() const { return static_cast<int>(guesses_.size()); }
  int per_guess() const { return per_guess_; }
  int accurate_guess(std::uint64_t mu_hat) const;
  const Contraction& at(int guess, int j) const { return guesses_[guess][j]; }

 private:
  double alpha_;
  int per_guess_;
  std::vector<std::vector<Contraction>> guesses_;
};

/// Maximal matching maintained under updates; on deletion both freed
/// endpoints rescan their matrix row for a free neighbor (O(n) probes).
/// Deterministic factor-2 sandwich: mu/2 <= size <= mu.
class CoarseMatching {
 public:
  explicit CoarseMatching(Vertex n) : mate_(n, kNoVertex) {}
  void apply(const QueryGraph& g, UpdateOp op, Vertex u, Vertex v);
  std::uint64_t size() const { return size_; }
  const std::vector<Vertex>& mate() const { return mate_; }

 private:
  void rescan(const QueryGraph& g, Vertex x);
  std::vector<Vertex> mate_;
  std::uint64_t size_ = 0;
};

struct PhaseInfo {
  enum class Type { I, II };
  Type type = Type::II;
  int index = 0;
  std::uint64_t m_init = 0;
  std::uint64_t mu_hat_init = 0;
  std::int64_t length = 0;
  std::int64_t remaining = 0;
};

/// Type I: ceil(eps * m^{0.5+eps0}) updates; type II: ceil(eps * mu_hat).
std::int64_t phase_length(PhaseInfo::Type type, std::uint64_t m,
                          std::uint64_t mu_hat, double eps, double eps0);

/// The dynamic (1+eps)-approximate matching-size maintainer.
class DynamicMatcher {
 public:
  DynamicMatcher(Vertex n, DynamicParams params);

  /// Apply one update; returns the currently published estimate.
  double update(UpdateOp op, Vertex u, Vertex v);

  double published() const { return published_->mu_star; }
  MatchAnswer query_match(Vertex v) const;
  const DynamicGraph& graph() const { return g_; }
  const PhaseInfo& phase() const { return phase_; }
  std::uint64_t coarse_mu() const { return coarse_.size(); }

  /// Adjacency probes plus snapshot/oracle work consumed so far.
  std::uint64_t work() const;
  int budget_underruns() const { return budget_underruns_; }

 private:
  struct Published {
    PhaseInfo::Type type = PhaseInfo::Type::II;
    double mu_star = 0;
    // type I
    std::vector<Vertex> mate;
    // type II
    std::shared_ptr<QueryGraph> contracted;  // frozen booleanized snapshot
    std::shared_ptr<QueryGraph> base_snapshot;
    std::vector<Vertex> phi;
    std::vector<std::vector<Vertex>> preimage;
    MatchHandlePtr handle;
    mutable std::unordered_map<std::uint64_t, Edge> lift_memo;
    std::vector<std::uint8_t> killed;

    MatchAnswer query(Vertex v, Vertex n) const;
  };

  struct Snapshot {
    std::shared_ptr<QueryGraph> graph;
    std::uint64_t m = 0, mu_hat = 0;
  };
  struct PendingRebuild {
    Snapshot source;
    std::deque<std::function<std::uint64_t()>> steps;  // each returns work done
    std::shared_ptr<Published> result;
  };

  std::unique_ptr<PendingRebuild> plan_build(Snapshot snap);
  void start_phase();
  void note_deletion(Vertex u, Vertex v);
  void drive_pending(std::uint64_t budget);

  DynamicGraph g_;
  DynamicParams params_;
  Rng rng_;
  CoarseMatching coarse_;
  ContractionSet contractions_;
  PhaseInfo phase_;
  std::shared_ptr<Published> published_;
  std::uint64_t extra_work_ = 0;
  int budget_underruns_ = 0;

  std::deque<Snapshot> snapshots_;  // deamortized mode
  std::unique_ptr<PendingRebuild> pending_;
};

/// Appendix-C folklore baseline: recompute a (1+eps)-approximate matching
/// every ceil(eps*m/2n) updates, deleting removed matched edges in between.
class BaselineMatcher {
 public:
  BaselineMatcher(Vertex n, double eps);
  void update(UpdateOp op, Vertex u, Vertex v);
  const std::vector<Vertex>& mate() const { return mate_; }
  int matching_size() const;
  const DynamicGraph& graph() const { return g_; }

 private:
  void rebuild();
  DynamicGraph g_;
  double eps_;
  std::vector<Vertex> mate_;
  std::int64_t until_rebuild_ = 1;
};

}  // namespace submatch
