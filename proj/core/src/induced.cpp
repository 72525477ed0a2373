#include "submatch/induced.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace submatch {

PrepParams PrepParams::make(Vertex n, double eps, double delta_in,
                            Preset preset) {
  if (!(eps > 0 && eps < 0.5))
    throw InvalidParameter("prep_params: eps must lie in (0, 1/2)");
  if (!(delta_in > 0 && delta_in <= 1))
    throw InvalidParameter("prep_params: delta_in must lie in (0, 1]");
  if (n <= 0) throw InvalidParameter("prep_params: n must be positive");

  PrepParams p;
  p.n = n;
  p.eps = eps;
  p.delta_in = delta_in;
  p.preset = preset;
  if (preset == Preset::Paper) {
    p.c_p = 100.0;
    p.c_r12 = 1000.0;
    p.c_r3 = 1000.0;
    p.c_T = 100.0;
    p.min_delta_out_edges = 0.0;
    p.r1_cap = p.r2_cap = -1;
    p.T_cap = 0;
    p.delta_out = std::pow(delta_in, 5) / 1e8;
  } else {
    p.c_p = 1.0;
    p.c_r12 = 4.0;
    p.c_r3 = 4.0;
    p.c_T = 1.0;
    p.min_delta_out_edges = 4.0;
    p.r1_cap = 4096;
    p.r2_cap = 512;
    p.T_cap = 3;
    p.delta_out =
        std::max(delta_in / p.c_out, p.min_delta_out_edges / static_cast<double>(n));
  }

  double lg = log_param(n, p.log_base);
  p.k = static_cast<std::int64_t>(std::ceil(std::pow(n, eps)));
  p.p = static_cast<std::int64_t>(
      std::ceil(p.c_p * std::pow(n, 2.0 - 2.0 * eps) * lg));
  p.eta = p.c_eta * delta_in * delta_in * lg / 10.0;
  p.T = static_cast<int>(std::ceil(p.c_T / (delta_in * delta_in)));
  if (p.T_cap > 0) p.T = std::min(p.T, p.T_cap);
  if (p.T < 1) p.T = 1;

  auto clamp = [](double raw, std::int64_t cap) {
    std::int64_t r = static_cast<std::int64_t>(std::ceil(raw));
    if (r < 1) r = 1;
    if (cap > 0 && r > cap) r = cap;
    return r;
  };
  p.r1 = clamp(p.c_r12 / (p.delta_out * p.delta_out) * lg, p.r1_cap);
  p.r2 = clamp(p.c_r12 / (p.delta_out * p.delta_out) * lg, p.r2_cap);
  p.r3 = clamp(p.c_r3 * delta_in * (static_cast<double>(n) / p.k) * lg, -1);
  return p;
}

double estimate_mu1(const std::vector<Edge>& matching,
                    const std::function<bool(Vertex)>& in_a, std::int64_t r1,
                    double delta_out, Vertex n, Rng& rng) {
  double slack = delta_out * n / 2.0;
  if (matching.empty()) return -slack;
  std::int64_t pop = static_cast<std::int64_t>(matching.size());
  double fraction;
  if (r1 >= pop) {
    // full pass is cheaper than sampling; both Lemma bounds hold exactly
    std::int64_t x = 0;
    for (const Edge& e : matching)
      if (in_a(e.u) && in_a(e.v)) ++x;
    fraction = static_cast<double>(x) / static_cast<double>(pop);
  } else {
    std::int64_t x = 0;
    for (std::int64_t i = 0; i < r1; ++i) {
      const Edge& e = matching[rand_below(rng, matching.size())];
      if (in_a(e.u) && in_a(e.v)) ++x;
    }
    fraction = static_cast<double>(x) / static_cast<double>(r1);
  }
  return static_cast<double>(pop) * fraction - slack;
}

double estimate_mu2(const GmmOracle& oracle, const std::vector<Vertex>& residual,
                    std::int64_t r2, double delta_out, Vertex n, Rng& rng) {
  double slack = delta_out * n / 2.0;
  if (residual.empty()) return -slack;
  std::int64_t pop = static_cast<std::int64_t>(residual.size());
  double fraction;
  if (r2 >= pop) {
    std::int64_t y = 0;
    for (Vertex v : residual)
      if (oracle.query_match(v).has_value()) ++y;
    fraction = static_cast<double>(y) / static_cast<double>(pop);
  } else {
    std::int64_t y = 0;
    for (std::int64_t i = 0; i < r2; ++i) {
      Vertex v = residual[rand_below(rng, residual.size())];
      if (oracle.query_match(v).has_value()) ++y;
    }
    fraction = static_cast<double>(y) / static_cast<double>(r2);
  }
  return static_cast<double>(pop) * fraction / 2.0 - slack;
}

std::vector<Vertex> removal_set(const std::vector<std::vector<Vertex>>& gbar,
                                const std::vector<std::uint8_t>& sampled,
                                double eta) {
  std::vector<Vertex> c;
  for (Vertex v = 0; v < static_cast<Vertex>(gbar.size()); ++v) {
    std::int64_t count = 0;
    for (Vertex u : gbar[v])
      if (sampled[u]) ++count;
    if (static_cast<double>(count) >= eta) c.push_back(v);
  }
  return c;
}

namespace {

// kp distinct pairs of `universe` in uniform random order; capped at the
// number of available pairs.
std::vector<std::pair<Vertex, Vertex>> sample_distinct_pairs(
    const std::vector<Vertex>& universe, std::int64_t target, Rng& rng) {
  std::int64_t m = static_cast<std::int64_t>(universe.size());
  if (m < 2) return {};
  std::int64_t total = m * (m - 1) / 2;
  std::vector<std::pair<Vertex, Vertex>> out;
  if (target >= total / 2) {
    out.reserve(total);
    for (std::int64_t i = 0; i < m; ++i)
      for (std::int64_t j = i + 1; j < m; ++j)
        out.push_back({universe[i], universe[j]});
    std::shuffle(out.begin(), out.end(), rng);
    if (target < total) out.resize(target);
    return out;
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(target * 2));
  out.reserve(target);
  while (static_cast<std::int64_t>(out.size()) < target) {
    std::int64_t i = rand_below(rng, m);
    std::int64_t j = rand_below(rng, m);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    std::uint64_t key = static_cast<std::uint64_t>(i) * m + j;
    if (seen.insert(key).second) out.push_back({universe[i], universe[j]});
  }
  return out;
}

}  // namespace

std::optional<PrepState> preprocess(const GraphAccess& g,
                                    std::function<bool(Vertex)> mem_a,
                                    std::uint64_t* membership_counter,
                                    const PrepParams& params, Rng& rng,
                                    PrepDiagnostics* diag) {
  Vertex n = g.size();
  if (params.n != n)
    throw InvalidParameter("preprocess: params built for different n");

  // One membership cache for the whole call; A is fixed while we run.
  auto cache = std::make_shared<std::vector<std::int8_t>>(n, -1);
  auto mem_cached = [mem_a, membership_counter, cache](Vertex v) -> bool {
    std::vector<std::int8_t>& c = *cache;
    if (c[v] < 0) {
      if (membership_counter) ++*membership_counter;
      c[v] = mem_a(v) ? 1 : 0;
    }
    return c[v] == 1;
  };

  std::vector<std::uint8_t> remaining(n, 1);
  std::vector<Vertex> rem_list(n);
  for (Vertex v = 0; v < n; ++v) rem_list[v] = v;

  double dbar_low = std::ceil(std::pow(n, 2.0 * params.eps));
  double lg = log_param(n, params.log_base);
  std::int64_t reject_attempts = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(params.c_reject * lg / params.delta_in)));
  reject_attempts = std::min<std::int64_t>(reject_attempts, 4 * std::max(n, 1));

  auto finish = [&](PrepState::Case kind, std::vector<Edge> mi,
                    std::shared_ptr<GmmOracle> what, int round) {
    PrepState st;
    st.kind = kind;
    st.remaining = remaining;
    st.matching = std::move(mi);
    st.mate.assign(n, kNoVertex);
    for (const Edge& e : st.matching) {
      st.mate[e.u] = e.v;
      st.mate[e.v] = e.u;
    }
    st.lowdeg = std::move(what);
    st.member = mem_cached;
    st.membership_counter = membership_counter;
    st.params = params;
    st.rounds_used = round;
    st.answer_known_.assign(n, 0);
    st.answer_cache_.resize(n);
    return st;
  };

  for (int round = 1; round <= params.T; ++round) {
    auto pairs =
        sample_distinct_pairs(rem_list, params.k * params.p, rng);
    std::int64_t chunk =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(pairs.size()) / params.k);

    std::vector<std::vector<Vertex>> gbar(n);
    for (std::int64_t i = 0; i < params.k; ++i) {
      std::int64_t lo = i * chunk;
      std::int64_t hi = (i + 1 == params.k)
                            ? static_cast<std::int64_t>(pairs.size())
                            : std::min<std::int64_t>((i + 1) * chunk, pairs.size());
      if (lo >= hi) break;

      // E^i scanned in order; M^i is the greedy matching over it.
      std::vector<Edge> mi;
      std::vector<std::uint8_t> in_mi(n, 0);
      for (std::int64_t t = lo; t < hi; ++t) {
        auto [u, v] = pairs[t];
        bool is_edge = g.edge(u, v);
        if (is_edge && !in_mi[u] && !in_mi[v]) {
          in_mi[u] = in_mi[v] = 1;
          mi.push_back(make_edge(u, v));
        }
      }
      for (const Edge& e : mi) {
        gbar[e.u].push_back(e.v);
        gbar[e.v].push_back(e.u);
      }

      // Case 1: explicit matching inside A
      double mu1 =
          estimate_mu1(mi, mem_cached, params.r1, params.delta_out, n, rng);
      if (mu1 >= 2.0 * params.delta_out * n)
        return finish(PrepState::Case::Explicit, std::move(mi), nullptr, round);

      // Case 2: low-degree oracle over the residual graph
      std::vector<std::uint8_t> host(n, 0);
      std::vector<Vertex> residual;
      for (Vertex v : rem_list)
        if (!in_mi[v]) {
          host[v] = 1;
          residual.push_back(v);
        }
      InducedView view{&g, host, mem_cached, nullptr, dbar_low};
      auto what = build_induced_lowdeg_oracle(view, params.delta_out,
                                              params.preset, rng);
      double mu2 = estimate_mu2(*what, residual, params.r2, params.delta_out,
                                n, rng);
      if (mu2 >= 4.0 * params.delta_out * n)
        return finish(PrepState::Case::Implicit, std::move(mi), std::move(what),
                      round);
    }

    // Sample A'_sp by rejection; a failed sample means A' is tiny and the
    // round proceeds with the partial sample.
    std::vector<std::uint8_t> asp(n, 0);
    for (std::int64_t s = 0; s < params.r3; ++s) {
      bool got = false;
      for (std::int64_t a = 0; a < reject_attempts && !got; ++a) {
        Vertex v = rem_list[rand_below(rng, rem_list.size())];
        if (mem_cached(v)) {
          asp[v] = 1;
          got = true;
        }
      }
      if (!got) break;
    }

    std::vector<Vertex> c = removal_set(gbar, asp, params.eta);
    if (diag) {
      diag->rounds = round;
      diag->removed_per_round.push_back(static_cast<int>(c.size()));
      diag->removal_sets.push_back(c);
      diag->remaining_per_round.push_back(rem_list.size() - c.size());
    }
    if (!c.empty()) {
      for (Vertex v : c) remaining[v] = 0;
      rem_list.clear();
      for (Vertex v = 0; v < n; ++v)
        if (remaining[v]) rem_list.push_back(v);
    }
    if (rem_list.size() < 2) break;
  }
  return std::nullopt;
}

MatchAnswer PrepState::query(Vertex v) const {
  if (answer_known_[v]) return answer_cache_[v];
  MatchAnswer ans;
  if (kind == Case::Explicit) {
    Vertex u = mate[v];
    if (u != kNoVertex && member(v) && member(u)) ans = make_edge(v, u);
  } else {
    // v must be in A and V' and unmatched by M'
    if (remaining[v] && mate[v] == kNoVertex && member(v))
      ans = lowdeg->query_match(v);
  }
  answer_known_[v] = 1;
  answer_cache_[v] = ans;
  return ans;
}

}  // namespace submatch
