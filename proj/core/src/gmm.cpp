#include "submatch/gmm.hpp"

#include <algorithm>
#include <cmath>

namespace submatch {

GmmParams GmmParams::make(Preset preset, double eps, double dbar) {
  GmmParams p;
  p.eps = eps;
  p.dbar = dbar;
  if (preset == Preset::Desk) {
    p.c_test = 4.0;
    p.test_cap = 256;
    p.reject_cap = 4096;
  }
  return p;
}

std::uint64_t GmmParams::ell_for(Vertex n) const {
  if (ell_override != 0) return ell_override;
  if (eps <= 0) throw InvalidParameter("GmmParams: eps <= 0");
  double raw = c_ell * dbar * log_param(n, log_base) / eps;
  if (raw >= 1e18) return ProbeBudget::kUnlimited;
  return static_cast<std::uint64_t>(std::ceil(raw));
}

GmmOracle::GmmOracle(InducedView view, GmmParams params)
    : view_(std::move(view)), params_(params) {
  Vertex n = view_.g->size();
  if (view_.host.empty()) {
    host_list_.resize(n);
    for (Vertex v = 0; v < n; ++v) host_list_[v] = v;
  } else {
    for (Vertex v = 0; v < n; ++v)
      if (view_.host[v]) host_list_.push_back(v);
  }
  member_cache_.assign(n, -1);
  adj_built_.assign(n, 0);
  adj_cache_.resize(n);
  answer_known_.assign(n, 0);
  answer_cache_.resize(n);
  ell_ = params_.ell_for(n);
}

void GmmOracle::set_permutation(const EdgePermutation& pi) {
  pi_ = pi;
  std::fill(answer_known_.begin(), answer_known_.end(), 0);
}

bool GmmOracle::in_set(Vertex v) const {
  if (!view_.host.empty() && !view_.host[v]) return false;
  if (!view_.member) return true;
  if (member_cache_[v] < 0) {
    if (view_.membership_counter) ++*view_.membership_counter;
    member_cache_[v] = view_.member(v) ? 1 : 0;
  }
  return member_cache_[v] == 1;
}

const std::vector<Vertex>& GmmOracle::induced_neighbors(Vertex v) const {
  if (!adj_built_[v]) {
    adj_built_[v] = 1;
    std::vector<Vertex>& out = adj_cache_[v];
    for (Vertex u : host_list_) {
      if (u == v) continue;
      if (view_.g->edge(v, u) && in_set(u)) out.push_back(u);
    }
  }
  return adj_cache_[v];
}

struct GmmOracle::Session {
  const EdgePermutation* pi;
  std::uint64_t ell;
  std::uint64_t evals = 0;
  bool exceeded = false;
  std::unordered_map<std::uint64_t, bool> memo;  // (edge, endpoint) -> EO
};

namespace {

std::uint64_t eo_key(Vertex n, Edge e, Vertex endpoint) {
  std::uint64_t pair = static_cast<std::uint64_t>(e.u) * n + e.v;
  return pair * 2 + (endpoint == e.v ? 1 : 0);
}

struct Frame {
  Edge e;
  Vertex endpoint;
  std::uint64_t key;
  std::vector<std::pair<EdgePermutation::Rank, Vertex>> children;
  std::size_t idx = 0;
};

}  // namespace

// Iterative EO: true iff `endpoint` is free of lower-rank matched edges,
// i.e. no incident edge below rank(e) is in the greedy matching.
bool GmmOracle::eval_eo(Session& s, Edge e0, Vertex endpoint0) const {
  Vertex n = view_.g->size();
  auto child_list = [&](Vertex u, const EdgePermutation::Rank& bound) {
    std::vector<std::pair<EdgePermutation::Rank, Vertex>> kids;
    for (Vertex w : induced_neighbors(u)) {
      auto r = s.pi->rank(u, w);
      if (r < bound) kids.push_back({r, w});
    }
    std::sort(kids.begin(), kids.end());
    return kids;
  };

  std::vector<Frame> stack;
  auto open = [&](Edge e, Vertex endpoint) -> std::optional<bool> {
    std::uint64_t key = eo_key(n, e, endpoint);
    auto it = s.memo.find(key);
    if (it != s.memo.end()) return it->second;
    if (++s.evals > s.ell) {
      s.exceeded = true;
      return std::nullopt;
    }
    stack.push_back(Frame{e, endpoint, key, child_list(endpoint, s.pi->rank(e.u, e.v)), 0});
    return std::nullopt;
  };

  auto first = open(e0, endpoint0);
  if (s.exceeded) return false;
  if (first.has_value()) return *first;

  std::optional<bool> child_result;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (child_result.has_value()) {
      if (*child_result) {
        // a lower-rank incident edge is matched: e is not in the matching
        s.memo[f.key] = false;
        stack.pop_back();
        child_result = false;
        continue;
      }
      ++f.idx;
      child_result.reset();
    }
    if (f.idx >= f.children.size()) {
      s.memo[f.key] = true;
      stack.pop_back();
      child_result = true;
      continue;
    }
    Vertex w = f.children[f.idx].second;
    Edge ce = make_edge(f.endpoint, w);
    auto r = open(ce, w);
    if (s.exceeded) return false;
    if (r.has_value()) child_result = r;
  }
  return child_result.value_or(false);
}

GmmOracle::VoResult GmmOracle::vo_with(const EdgePermutation& pi, Vertex v,
                                       std::uint64_t ell) const {
  VoResult res;
  if (trivial_ || !in_set(v)) return res;
  std::vector<std::pair<EdgePermutation::Rank, Vertex>> inc;
  for (Vertex u : induced_neighbors(v)) inc.push_back({pi.rank(v, u), u});
  std::sort(inc.begin(), inc.end());

  Session s;
  s.pi = &pi;
  s.ell = ell;
  for (const auto& [rank, u] : inc) {
    bool eo = eval_eo(s, make_edge(v, u), u);
    if (s.exceeded) {
      res.status = VoResult::Status::BudgetExceeded;
      res.eo_evals = s.evals;
      return res;
    }
    if (eo) {
      res.status = VoResult::Status::Matched;
      res.edge = make_edge(v, u);
      res.eo_evals = s.evals;
      return res;
    }
  }
  res.eo_evals = s.evals;
  return res;
}

bool GmmOracle::eo_probe(const EdgePermutation& pi, Edge e, Vertex u,
                         std::uint64_t ell, bool* budget_exceeded) const {
  Session s;
  s.pi = &pi;
  s.ell = ell;
  bool r = eval_eo(s, e, u);
  if (budget_exceeded) *budget_exceeded = s.exceeded;
  return !s.exceeded && r;
}

MatchAnswer GmmOracle::query_match(Vertex v) const {
  if (answer_known_[v]) return answer_cache_[v];
  MatchAnswer ans;
  if (!trivial_) {
    VoResult rv = vo(v);
    if (rv.status == VoResult::Status::Matched) {
      Vertex u = rv.edge.u == v ? rv.edge.v : rv.edge.u;
      VoResult ru = vo(u);
      if (ru.status == VoResult::Status::Matched) {
        ans = rv.edge;
        answer_known_[u] = 1;
        answer_cache_[u] = rv.edge;
      }
    }
  }
  answer_known_[v] = 1;
  answer_cache_[v] = ans;
  return ans;
}

namespace {

// Uniform vertex of the induced set, by rejection through the membership
// oracle. Returns kNoVertex when every attempt missed.
Vertex sample_induced_vertex(const GmmOracle& o, std::int64_t attempts,
                             Rng& rng) {
  const std::vector<Vertex>& host = o.host_list();
  if (host.empty()) return kNoVertex;
  for (std::int64_t a = 0; a < attempts; ++a) {
    Vertex v = host[rand_below(rng, host.size())];
    if (o.in_set(v)) return v;
  }
  return kNoVertex;
}

std::int64_t count_from(double raw, std::int64_t cap) {
  std::int64_t r = static_cast<std::int64_t>(std::ceil(raw));
  if (r < 1) r = 1;
  if (cap > 0 && r > cap) r = cap;
  return r;
}

}  // namespace

TestPermResult test_perm(const GmmOracle& oracle, const EdgePermutation& pi,
                         double eps, Rng& rng) {
  const GmmParams& p = oracle.params();
  Vertex n = oracle.ambient_size();
  std::int64_t r = count_from(p.c_test * log_param(n, p.log_base) / eps, p.test_cap);
  std::int64_t attempts =
      count_from(p.c_reject * log_param(n, p.log_base) / eps, p.reject_cap);
  std::int64_t x = 0;
  for (std::int64_t i = 0; i < r; ++i) {
    Vertex v = sample_induced_vertex(oracle, attempts, rng);
    if (v == kNoVertex) return {TestPermResult::Outcome::SampleFailed, 0};
    auto res = oracle.vo_with(pi, v, oracle.ell());
    if (res.status == GmmOracle::VoResult::Status::BudgetExceeded) ++x;
  }
  double f = static_cast<double>(x) / static_cast<double>(r);
  return {f <= 0.75 * eps ? TestPermResult::Outcome::Yes
                          : TestPermResult::Outcome::No,
          f};
}

namespace {

// Shared preprocessing loop: sample candidates, accept the first that
// TestPerm approves. Returns the index accepted, -1 when sampling failed
// (induced set too small), -2 when every candidate was rejected.
int accept_permutation(GmmOracle& oracle, Rng& rng) {
  const GmmParams& p = oracle.params();
  Vertex n = oracle.ambient_size();
  int candidates = static_cast<int>(
      std::ceil(p.c_pi * log_param(n, p.log_base)));
  if (candidates < 1) candidates = 1;
  EdgePermutation last(0);
  for (int i = 0; i < candidates; ++i) {
    EdgePermutation pi(rng());
    last = pi;
    TestPermResult t = test_perm(oracle, pi, p.eps, rng);
    if (t.outcome == TestPermResult::Outcome::SampleFailed) return -1;
    if (t.outcome == TestPermResult::Outcome::Yes) {
      oracle.set_permutation(pi);
      return i;
    }
  }
  oracle.set_permutation(last);
  return -2;
}

}  // namespace

std::shared_ptr<GmmOracle> build_gmm_oracle(const GraphAccess& g,
                                            const GmmParams& params,
                                            Rng& rng) {
  auto oracle = std::make_shared<GmmOracle>(
      InducedView{&g, {}, nullptr, nullptr, params.dbar}, params);
  int r = accept_permutation(*oracle, rng);
  if (r == -2)
    throw NoPermutationAccepted(
        "no candidate permutation accepted (dbar too small or constants too "
        "tight)");
  if (r == -1) oracle->set_trivial();  // empty universe
  return oracle;
}

std::shared_ptr<GmmOracle> build_induced_lowdeg_oracle(InducedView view,
                                                       double eps,
                                                       Preset preset,
                                                       Rng& rng) {
  GmmParams params = GmmParams::make(preset, eps, view.max_degree);
  auto oracle = std::make_shared<GmmOracle>(std::move(view), params);
  int r = accept_permutation(*oracle, rng);
  if (r == -1) {
    // Sampling through the membership oracle kept missing: the induced set
    // is tiny, so the empty matching already meets the (2, eps n) contract.
    oracle->set_trivial();
  }
  // r == -2: every candidate rejected; keep the last one. Validity and
  // consistency of answers never depend on the permutation quality.
  return oracle;
}

}  // namespace submatch
