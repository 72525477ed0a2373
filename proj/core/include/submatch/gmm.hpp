#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "submatch/graph.hpp"
#include "submatch/preset.hpp"

namespace submatch {

struct GmmParams {
  double eps = 0.1;   // additive-slack parameter
  double dbar = 1.0;  // degree upper-bound parameter
  double c_ell = 8.0;        // ell = ceil(c_ell * dbar * log(n) / eps)
  double c_pi = 4.0;         // candidate permutations: ceil(c_pi * log(n))
  double c_test = 1000.0;    // TestPerm samples: ceil(c_test * log(n) / eps)
  std::int64_t test_cap = -1;          // cap on TestPerm samples (-1: none)
  double c_reject = 2.0;     // rejection attempts: ceil(c_reject * log(n) / eps)
  std::int64_t reject_cap = -1;
  std::uint64_t ell_override = 0;      // 0: use formula
  double log_base = 2.0;

  static GmmParams make(Preset preset, double eps, double dbar);
  std::uint64_t ell_for(Vertex n) const;
};

/// Access to an induced subgraph G[A] of a (possibly restricted) host graph:
/// adjacency through the matrix, A through a membership callable. The
/// membership answer must be fixed for the lifetime of the view.
struct InducedView {
  const GraphAccess* g = nullptr;
  std::vector<std::uint8_t> host;              // empty: all vertices
  std::function<bool(Vertex)> member;          // null: all host vertices
  std::uint64_t* membership_counter = nullptr;
  double max_degree = 0;                       // degree bound of the host graph
};

/// Local-computation oracle for one fixed randomized greedy maximal matching
/// of G[A], queried per vertex under a recursion budget. Answers are a pure
/// function of (view, permutation, ell); caches only change cost.
class GmmOracle {
 public:
  GmmOracle(InducedView view, GmmParams params);

  struct VoResult {
    enum class Status { Matched, Unmatched, BudgetExceeded };
    Status status = Status::Unmatched;
    Edge edge{};
    std::uint64_t eo_evals = 0;  // T(v, pi): distinct EO evaluations
  };

  /// Scan v's induced incident edges in rank order; first edge whose EO is
  /// true wins. BudgetExceeded once distinct EO evaluations pass ell.
  VoResult vo(Vertex v) const { return vo_with(pi_, v, ell_); }
  VoResult vo_with(const EdgePermutation& pi, Vertex v,
                   std::uint64_t ell) const;

  /// Two-sided query: both endpoints must resolve within budget.
  MatchAnswer query_match(Vertex v) const;

  /// Single EO evaluation in a fresh session (test access).
  bool eo_probe(const EdgePermutation& pi, Edge e, Vertex u,
                std::uint64_t ell, bool* budget_exceeded = nullptr) const;

  std::uint64_t ell() const { return ell_; }
  const EdgePermutation& permutation() const { return pi_; }
  bool trivial() const { return trivial_; }
  Vertex ambient_size() const { return view_.g->size(); }

  bool in_set(Vertex v) const;
  const std::vector<Vertex>& induced_neighbors(Vertex v) const;
  const std::vector<Vertex>& host_list() const { return host_list_; }

  void set_permutation(const EdgePermutation& pi);
  void set_ell(std::uint64_t ell) {
    ell_ = ell;
    std::fill(answer_known_.begin(), answer_known_.end(), 0);
  }
  void set_trivial() { trivial_ = true; }

  const GmmParams& params() const { return params_; }

 private:
  struct Session;
  bool eval_eo(Session& s, Edge e, Vertex endpoint) const;

  InducedView view_;
  GmmParams params_;
  EdgePermutation pi_{0};
  std::uint64_t ell_ = 0;
  bool trivial_ = false;

  std::vector<Vertex> host_list_;
  mutable std::vector<std::int8_t> member_cache_;    // -1 unknown, 0, 1
  mutable std::vector<std::int8_t> adj_built_;
  mutable std::vector<std::vector<Vertex>> adj_cache_;
  mutable std::vector<std::int8_t> answer_known_;
  mutable std::vector<MatchAnswer> answer_cache_;
};

struct TestPermResult {
  enum class Outcome { Yes, No, SampleFailed };
  Outcome outcome;
  double f_tilde = 0;
};

/// Samples r vertices of the induced set; accepts when the fraction with
/// T(v, pi) > ell is at most 3*eps/4.
TestPermResult test_perm(const GmmOracle& oracle, const EdgePermutation& pi,
                         double eps, Rng& rng);

/// Appendix-A preprocessing on the plain graph: sample candidate
/// permutations until TestPerm accepts. Throws NoPermutationAccepted.
std::shared_ptr<GmmOracle> build_gmm_oracle(const GraphAccess& g,
                                            const GmmParams& params, Rng& rng);

/// Low-degree induced wrapper: same construction simulated on G[A] through
/// the membership oracle. Never throws; if the induced set is too small to
/// sample it returns the trivial empty-matching oracle.
std::shared_ptr<GmmOracle> build_induced_lowdeg_oracle(InducedView view,
                                                       double eps,
                                                       Preset preset,
                                                       Rng& rng);

}  // namespace submatch
