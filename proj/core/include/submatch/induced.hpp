#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "submatch/gmm.hpp"
#include "submatch/graph.hpp"
#include "submatch/preset.hpp"

namespace submatch {

/// Parameter bundle for the induced-subgraph matching oracle.
struct PrepParams {
  Vertex n = 0;
  double eps = 0.25;
  double delta_in = 0.25;
  double delta_out = 0;

  std::int64_t p = 0;   // pairs per ordered list
  std::int64_t k = 0;   // number of lists, ceil(n^eps)
  double eta = 0;       // removal-degree threshold
  int T = 0;            // repeat rounds
  std::int64_t r1 = 0, r2 = 0, r3 = 0;

  // Constant knobs; paper values 100 / 1000 / 1e8, desk 1 / 4 / 8.
  Preset preset = Preset::Desk;
  double c_p = 1.0;
  double c_r12 = 4.0;
  double c_r3 = 4.0;
  double c_T = 1.0;
  double c_out = 8.0;          // desk: delta_out = delta_in / c_out
  double c_eta = 1.0;
  double min_delta_out_edges = 4.0;  // desk floor on delta_out * n
  std::int64_t r1_cap = -1, r2_cap = -1;
  int T_cap = 0;               // 0: no cap
  double c_reject = 2.0;       // A'-sample rejection attempts multiplier
  double log_base = 2.0;

  static PrepParams make(Vertex n, double eps, double delta_in, Preset preset);
};

/// Output of preprocessing: remaining set V', explicit matching M', and for
/// the implicit case the stored low-degree oracle over G[A' \ V(M')].
struct PrepState {
  enum class Case { Explicit, Implicit };
  Case kind = Case::Explicit;

  std::vector<std::uint8_t> remaining;  // V' mask
  std::vector<Vertex> mate;             // M' certificate (kNoVertex: unmatched)
  std::vector<Edge> matching;           // M' edges
  std::shared_ptr<GmmOracle> lowdeg;    // implicit case only
  std::function<bool(Vertex)> member;
  std::uint64_t* membership_counter = nullptr;
  PrepParams params;
  int rounds_used = 0;

  MatchAnswer query(Vertex v) const;

 private:
  friend std::optional<PrepState> preprocess(const GraphAccess&,
                                             std::function<bool(Vertex)>,
                                             std::uint64_t*, const PrepParams&,
                                             Rng&, PrepDiagnostics*);
  mutable std::vector<std::int8_t> answer_known_;
  mutable std::vector<MatchAnswer> answer_cache_;
};

/// Per-round instrumentation (removal behaviour, shrinkage).
struct PrepDiagnostics {
  int rounds = 0;
  std::vector<int> removed_per_round;
  std::vector<std::vector<Vertex>> removal_sets;
  std::vector<std::size_t> remaining_per_round;
};

/// Algorithm-1 preprocessing. Returns nullopt for bottom; if
/// mu(G[A]) >= delta_in * n, bottom is not returned (whp under the paper
/// constants, empirically under the desk preset).
std::optional<PrepState> preprocess(const GraphAccess& g,
                                    std::function<bool(Vertex)> mem_a,
                                    std::uint64_t* membership_counter,
                                    const PrepParams& params, Rng& rng,
                                    PrepDiagnostics* diag = nullptr);

/// mu~1 = |M| * X / r1 - delta_out * n / 2 over r1 sampled edges (both
/// endpoints in A). Falls back to a full pass when r1 covers the population.
double estimate_mu1(const std::vector<Edge>& matching,
                    const std::function<bool(Vertex)>& in_a, std::int64_t r1,
                    double delta_out, Vertex n, Rng& rng);

/// mu~2 = |R| * Y / (2 r2) - delta_out * n / 2 over r2 sampled residual
/// vertices (matched under the low-degree oracle).
double estimate_mu2(const GmmOracle& oracle, const std::vector<Vertex>& residual,
                    std::int64_t r2, double delta_out, Vertex n, Rng& rng);

/// C = vertices with at least eta neighbors from the sampled set in Gbar.
std::vector<Vertex> removal_set(const std::vector<std::vector<Vertex>>& gbar,
                                const std::vector<std::uint8_t>& sampled,
                                double eta);

}  // namespace submatch
