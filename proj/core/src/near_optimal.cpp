#include "submatch/near_optimal.hpp"

#include <cmath>

namespace submatch {

NearOptimalResult near_optimal_oracle(const GraphAccess& g,
                                      const NearOptimalParams& params,
                                      Rng& rng) {
  if (!(params.gamma > 0 && params.gamma < 1))
    throw InvalidParameter("near_optimal: gamma not in (0,1)");
  Vertex n = g.size();
  int k = static_cast<int>(std::ceil(1.0 / params.gamma));
  if (params.k_cap >= 0) k = std::min(k, params.k_cap);

  int max_rounds = params.max_rounds > 0 ? params.max_rounds : 16 + n / 8;

  NearOptimalResult res;
  res.handle = std::make_shared<EmptyMatch>();
  double eps_in = params.eps_prime;
  OracleBackend backend(params.preset);

  bool tau = true;
  while (tau) {
    tau = false;
    ++res.rounds;
    if (res.rounds > max_rounds)
      throw CallCapExceeded("near_optimal: round cap " +
                            std::to_string(max_rounds));
    for (int i = 0; i <= k; ++i) {
      ++res.calls;
      BoostSchedule sched = BoostSchedule::make(
          i, params.gamma * params.gamma, eps_in, params.preset,
          params.psi_override);
      Augmenter aug(g, res.handle, std::move(sched), backend, rng());
      AugmentResult ar = aug.run();
      res.log.push_back({res.rounds, i, ar.success});
      if (ar.success) {
        res.handle = ar.match_out;
        eps_in = ar.eps_out;
        ++res.successes;
        tau = true;
      }
    }
  }
  res.eps_final = eps_in;
  return res;
}

double estimate_size(const MatchHandle& handle, double gamma, Vertex n,
                     double c_s, Rng& rng) {
  if (n <= 0) return 0;
  if (!(gamma > 0)) throw InvalidParameter("estimate_size: gamma <= 0");
  std::int64_t s = static_cast<std::int64_t>(
      std::ceil(c_s * log_param(n) / (gamma * gamma)));
  if (s >= n) {
    std::int64_t matched = 0;
    for (Vertex v = 0; v < n; ++v)
      if (handle.query(v).has_value()) ++matched;
    return static_cast<double>(matched) / 2.0;
  }
  std::int64_t matched = 0;
  for (std::int64_t i = 0; i < s; ++i) {
    Vertex v = static_cast<Vertex>(rand_below(rng, n));
    if (handle.query(v).has_value()) ++matched;
  }
  return static_cast<double>(n) * (static_cast<double>(matched) / s) / 2.0;
}

}  // namespace submatch
