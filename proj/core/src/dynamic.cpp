#include "submatch/dynamic.hpp"

#include <algorithm>
#include <cmath>

#include "submatch/exact.hpp"

namespace submatch {

DynamicParams DynamicParams::make(double eps, Preset preset) {
  if (!(eps > 0 && eps < 1)) throw InvalidParameter("dynamic: eps not in (0,1)");
  DynamicParams p;
  p.eps = eps;
  p.preset = preset;
  if (preset == Preset::Paper) {
    p.c_vphi = 8.0;
    p.c_contr = 512.0;
    p.probe_contractions = -1;  // all of them
    p.k_cap = -1;
  }
  return p;
}

Contraction::Contraction(Vertex n, Vertex vphi, Rng& rng)
    : vphi_(std::max<Vertex>(vphi, 2)), phi_(n) {
  for (Vertex v = 0; v < n; ++v)
    phi_[v] = static_cast<Vertex>(rand_below(rng, vphi_));
}

void Contraction::apply(UpdateOp op, Vertex u, Vertex v) {
  Vertex a = phi_[u], b = phi_[v];
  if (a == b) return;  // self-loop in the contracted graph: dropped
  std::uint64_t kk = key(a, b);
  if (op == UpdateOp::Insert) {
    ++mult_[kk];
  } else {
    auto it = mult_.find(kk);
    if (it != mult_.end() && --it->second == 0) mult_.erase(it);
  }
}

std::int64_t Contraction::multiplicity(Vertex a, Vertex b) const {
  auto it = mult_.find(key(a, b));
  return it == mult_.end() ? 0 : it->second;
}

std::vector<std::vector<Vertex>> Contraction::preimages() const {
  std::vector<std::vector<Vertex>> pre(vphi_);
  for (Vertex v = 0; v < static_cast<Vertex>(phi_.size()); ++v)
    pre[phi_[v]].push_back(v);
  return pre;
}

QueryGraph Contraction::snapshot() const {
  QueryGraph g(vphi_);
  for (const auto& [kk, count] : mult_) {
    if (count <= 0) continue;
    Vertex a = static_cast<Vertex>(kk / vphi_);
    Vertex b = static_cast<Vertex>(kk % vphi_);
    g.set_edge(a, b, true);
  }
  return g;
}

ContractionSet::ContractionSet(Vertex n, const DynamicParams& params, Rng& rng)
    : alpha_(params.alpha) {
  double lg = std::log(std::max<double>(n, 2.0));
  per_guess_ = std::max(
      1, static_cast<int>(std::ceil(params.c_contr * lg /
                                    (params.eps * params.eps))));
  int k = static_cast<int>(
              std::ceil(std::log(std::max<double>(n, 2.0)) / std::log(alpha_))) +
          1;
  for (int i = 0; i < k; ++i) {
    Vertex vphi = static_cast<Vertex>(std::ceil(
        params.c_vphi * std::pow(alpha_, i + 1) / params.eps));
    std::vector<Contraction> block;
    block.reserve(per_guess_);
    for (int j = 0; j < per_guess_; ++j) block.emplace_back(n, vphi, rng);
    guesses_.push_back(std::move(block));
  }
}

void ContractionSet::apply(UpdateOp op, Vertex u, Vertex v) {
  for (auto& block : guesses_)
    for (auto& c : block) c.apply(op, u, v);
}

int ContractionSet::accurate_guess(std::uint64_t mu_hat) const {
  double m = std::max<double>(mu_hat, 1.0);
  int i = static_cast<int>(std::floor(std::log(m) / std::log(alpha_)));
  return std::clamp(i, 0, guess_count() - 1);
}

void CoarseMatching::apply(const QueryGraph& g, UpdateOp op, Vertex u,
                           Vertex v) {
  if (op == UpdateOp::Insert) {
    if (mate_[u] == kNoVertex && mate_[v] == kNoVertex) {
      mate_[u] = v;
      mate_[v] = u;
      ++size_;
    }
  } else if (mate_[u] == v) {
    mate_[u] = mate_[v] = kNoVertex;
    --size_;
    rescan(g, u);
    rescan(g, v);
  }
}

void CoarseMatching::rescan(const QueryGraph& g, Vertex x) {
  if (mate_[x] != kNoVertex) return;
  for (Vertex w = 0; w < g.size(); ++w) {
    if (w == x || mate_[w] != kNoVertex) continue;
    if (g.edge(x, w)) {
      mate_[x] = w;
      mate_[w] = x;
      ++size_;
      return;
    }
  }
}

MatchAnswer DynamicMatcher::Published::query(Vertex v, Vertex n) const {
  if (v < 0 || v >= n) throw InvalidVertex("query_match: vertex out of range");
  if (type == PhaseInfo::Type::I) {
    Vertex u = mate.empty() ? kNoVertex : mate[v];
    return u == kNoVertex ? MatchAnswer{} : MatchAnswer{make_edge(v, u)};
  }
  if (!handle || killed[v]) return std::nullopt;
  Vertex a = phi[v];
  MatchAnswer ca = handle->query(a);
  if (!ca) return std::nullopt;
  std::uint64_t kk =
      static_cast<std::uint64_t>(ca->u) * contracted->size() + ca->v;
  auto it = lift_memo.find(kk);
  if (it == lift_memo.end()) {
    // lexicographically first concrete edge between the two preimage classes
    Edge lifted{kNoVertex, kNoVertex};
    for (Vertex x : preimage[ca->u]) {
      for (Vertex y : preimage[ca->v]) {
        if (base_snapshot->peek(x, y)) {
          lifted = make_edge(x, y);
          break;
        }
      }
      if (lifted.u != kNoVertex) break;
    }
    it = lift_memo.emplace(kk, lifted).first;
  }
  const Edge& e = it->second;
  if (e.u == kNoVertex) return std::nullopt;
  if (v != e.u && v != e.v) return std::nullopt;  // class used by another vertex
  if (killed[e.u] || killed[e.v]) return std::nullopt;
  return e;
}

DynamicMatcher::DynamicMatcher(Vertex n, DynamicParams params)
    : g_(n),
      params_(params),
      rng_(params.seed),
      coarse_(n),
      contractions_(n, params, rng_) {
  phase_.index = 0;
  start_phase();
}

std::unique_ptr<DynamicMatcher::PendingRebuild> DynamicMatcher::plan_build(
    Snapshot snap) {
  auto plan = std::make_unique<PendingRebuild>();
  plan->source = snap;
  auto result = std::make_shared<Published>();
  plan->result = result;
  Vertex n = g_.size();
  double eps = params_.eps;

  bool type1 =
      snap.m > 0 &&
      static_cast<double>(snap.mu_hat) >=
          std::pow(static_cast<double>(snap.m), 0.5 + params_.eps0_value());

  if (type1) {
    auto graph = snap.graph;
    plan->steps.push_back([result, graph, eps, n]() -> std::uint64_t {
      Matching m = static_approx_matching(*graph, eps);
      result->type = PhaseInfo::Type::I;
      result->mu_star = m.size();
      result->mate = std::move(m.mate);
      return static_cast<std::uint64_t>(n) * n / 64 + 1;
    });
    return plan;
  }

  result->type = PhaseInfo::Type::II;
  result->killed.assign(n, 0);
  if (snap.mu_hat == 0) {
    plan->steps.push_back([result]() -> std::uint64_t {
      result->mu_star = 0;
      return 1;
    });
    return plan;
  }

  int guess = contractions_.accurate_guess(snap.mu_hat);
  int probe = params_.probe_contractions < 0
                  ? contractions_.per_guess()
                  : std::min(params_.probe_contractions,
                             contractions_.per_guess());
  double gamma = params_.gamma_value();
  auto best = std::make_shared<std::pair<double, int>>(-1.0, -1);
  auto keep = std::make_shared<std::vector<
      std::tuple<std::shared_ptr<QueryGraph>, MatchHandlePtr, int>>>();

  for (int j = 0; j < probe; ++j) {
    std::uint64_t seed = rng_();
    auto snap_graph = snap.graph;
    const Contraction* contr = &contractions_.at(guess, j);
    int kcap = params_.k_cap;
    Preset preset = params_.preset;
    plan->steps.push_back([this, result, best, keep, snap_graph, contr, gamma,
                           kcap, preset, seed, j, n]() -> std::uint64_t {
      // contracted booleanized snapshot of the source graph under phi_j
      Vertex vphi = contr->contracted_size();
      auto cg = std::make_shared<QueryGraph>(vphi);
      for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
          if (snap_graph->peek(u, v)) {
            Vertex a = contr->phi(u), b = contr->phi(v);
            if (a != b) cg->set_edge(std::min(a, b), std::max(a, b), true);
          }
      NearOptimalParams np = NearOptimalParams::make(gamma, preset);
      np.k_cap = kcap;
      Rng local(seed);
      NearOptimalResult nr = near_optimal_oracle(*cg, np, local);
      double est = estimate_size(*nr.handle, gamma, vphi, np.c_s, local);
      if (est > best->first) {
        *best = {est, j};
        keep->clear();
        keep->emplace_back(cg, nr.handle, j);
      }
      return cg->probe_count() + static_cast<std::uint64_t>(n) * n / 64;
    });
  }

  auto snap_graph = snap.graph;
  int guess_copy = guess;
  plan->steps.push_back([this, result, best, keep, snap_graph, guess_copy,
                         n]() -> std::uint64_t {
    if (best->second < 0) {
      result->mu_star = 0;
      return 1;
    }
    auto& [cg, handle, jj] = keep->front();
    const Contraction& contr = contractions_.at(guess_copy, jj);
    result->mu_star = best->first;
    result->contracted = cg;
    result->base_snapshot = snap_graph;
    result->phi.assign(n, 0);
    for (Vertex v = 0; v < n; ++v) result->phi[v] = contr.phi(v);
    result->preimage = contr.preimages();
    result->handle = handle;
    return 1;
  });
  return plan;
}

std::int64_t phase_length(PhaseInfo::Type type, std::uint64_t m,
                          std::uint64_t mu_hat, double eps, double eps0) {
  double len = type == PhaseInfo::Type::I
                   ? eps * std::pow(static_cast<double>(m), 0.5 + eps0)
                   : eps * static_cast<double>(mu_hat);
  return std::max<std::int64_t>(1,
                                static_cast<std::int64_t>(std::ceil(len)));
}

void DynamicMatcher::start_phase() {
  ++phase_.index;
  Snapshot snap;
  snap.graph = std::make_shared<QueryGraph>(g_.graph());
  snap.m = g_.edge_count();
  snap.mu_hat = coarse_.size();

  bool type1 =
      snap.m > 0 &&
      static_cast<double>(snap.mu_hat) >=
          std::pow(static_cast<double>(snap.m), 0.5 + params_.eps0_value());
  phase_.type = type1 ? PhaseInfo::Type::I : PhaseInfo::Type::II;
  phase_.m_init = snap.m;
  phase_.mu_hat_init = snap.mu_hat;
  phase_.length = phase_length(phase_.type, snap.m, snap.mu_hat, params_.eps,
                               params_.eps0_value());
  phase_.remaining = phase_.length;

  if (!params_.deamortized) {
    auto plan = plan_build(snap);
    for (auto& step : plan->steps) extra_work_ += step();
    published_ = plan->result;
    return;
  }

  // Deamortized: publish lags two phases behind.
  snapshots_.push_back(snap);
  if (phase_.index == 1) {
    auto plan = plan_build(snapshots_.front());
    for (auto& step : plan->steps) extra_work_ += step();
    published_ = plan->result;
  } else if (phase_.index > 2) {
    // background target: the phase-(index-2) snapshot
    pending_ = plan_build(snapshots_[snapshots_.size() - 3]);
  }
  while (snapshots_.size() > 3) snapshots_.pop_front();
}

void DynamicMatcher::drive_pending(std::uint64_t budget) {
  if (!pending_) return;
  std::uint64_t done = 0;
  while (!pending_->steps.empty() && done < budget) {
    done += pending_->steps.front()();
    pending_->steps.pop_front();
  }
  extra_work_ += done;
}

void DynamicMatcher::note_deletion(Vertex u, Vertex v) {
  Published& pub = *published_;
  if (pub.type == PhaseInfo::Type::I) {
    if (!pub.mate.empty() && pub.mate[u] == v) {
      pub.mate[u] = pub.mate[v] = kNoVertex;
    }
    return;
  }
  if (!pub.handle || pub.killed[u] || pub.killed[v]) return;
  MatchAnswer a = pub.query(u, g_.size());
  if (a && ((a->u == u && a->v == v) || (a->u == v && a->v == u))) {
    pub.killed[u] = 1;
    pub.killed[v] = 1;
  }
}

double DynamicMatcher::update(UpdateOp op, Vertex u, Vertex v) {
  if (op == UpdateOp::Delete) note_deletion(u, v);
  g_.apply(op, u, v);
  coarse_.apply(g_.graph(), op, u, v);
  contractions_.apply(op, u, v);

  if (params_.deamortized) {
    std::uint64_t budget = params_.work_budget > 0 ? params_.work_budget
                                                   : ProbeBudget::kUnlimited;
    drive_pending(budget);
  }

  if (--phase_.remaining <= 0) {
    if (params_.deamortized) {
      if (pending_) {
        if (!pending_->steps.empty()) {
          ++budget_underruns_;
          drive_pending(ProbeBudget::kUnlimited);
        }
        published_ = pending_->result;
        pending_.reset();
      }
    }
    start_phase();
  }
  return published_->mu_star;
}

MatchAnswer DynamicMatcher::query_match(Vertex v) const {
  return published_->query(v, g_.size());
}

std::uint64_t DynamicMatcher::work() const {
  return g_.graph().probe_count() + extra_work_;
}

BaselineMatcher::BaselineMatcher(Vertex n, double eps)
    : g_(n), eps_(eps), mate_(n, kNoVertex) {
  if (!(eps > 0)) throw InvalidParameter("baseline: eps <= 0");
}

int BaselineMatcher::matching_size() const {
  int s = 0;
  for (Vertex v = 0; v < static_cast<Vertex>(mate_.size()); ++v)
    if (mate_[v] != kNoVertex && mate_[v] > v) ++s;
  return s;
}

void BaselineMatcher::rebuild() {
  mate_ = static_approx_matching(g_.graph(), eps_).mate;
  double cadence = eps_ * static_cast<double>(g_.edge_count()) /
                   (2.0 * static_cast<double>(g_.size()));
  until_rebuild_ = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::floor(cadence)));
}

void BaselineMatcher::update(UpdateOp op, Vertex u, Vertex v) {
  g_.apply(op, u, v);
  if (op == UpdateOp::Delete && mate_[u] == v)
    mate_[u] = mate_[v] = kNoVertex;
  if (--until_rebuild_ <= 0) rebuild();
}

}  // namespace submatch
