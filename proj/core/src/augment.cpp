#include "submatch/augment.hpp"

#include "submatch/exact.hpp"

#include <algorithm>
#include <cmath>

namespace submatch {

double BoostSchedule::eps_t(int t) const {
  double e = eps_in;
  for (int i = 0; i < t; ++i) {
    e *= 9.0;
    if (preset == Preset::Desk && e > eps_cap) return eps_cap;
  }
  if (preset == Preset::Desk) e = std::min(e, eps_cap);
  return e;
}

BoostSchedule BoostSchedule::make(int k, double gamma, double eps_in,
                                  Preset preset, double psi_override) {
  if (k < 0) throw InvalidParameter("boost: k < 0");
  if (!(gamma > 0 && gamma < 1)) throw InvalidParameter("boost: gamma not in (0,1)");
  if (!(eps_in > 0)) throw InvalidParameter("boost: eps_in <= 0");

  BoostSchedule s;
  s.k = k;
  s.gamma = gamma;
  s.eps_in = eps_in;
  s.preset = preset;

  if (preset == Preset::Paper) {
    // psi sufficiently small: survivors gamma*(2k+2)^{-(2k+2)} n must beat
    // k*1e8*psi*n plus delta_0 = psi^5.
    double surv = gamma * std::pow(2.0 * k + 2.0, -(2.0 * k + 2.0));
    double psi = std::min(std::pow(surv / 2.0, 0.2),
                          k > 0 ? surv / (2.0 * k * 1e8) : 0.25);
    s.psi = std::min(psi, 0.25);
    for (int i = 0; i <= k; ++i) {
      s.psi_i.push_back(std::pow(s.psi, std::pow(5.0, 4.0 * i + 3.0)) / 1e8);
      s.delta_i.push_back(std::pow(s.psi, std::pow(5.0, 4.0 * i + 1.0)));
    }
    double sum_inv = 0;
    for (int i = 0; i < k; ++i) sum_inv += 1.0 / std::max(s.psi_i[i], 1e-300);
    double t_formula = 4.0 * (k + 1) * std::max(1.0, sum_inv) + k + 2;
    s.iteration_cap = t_formula > 1e9 ? 1'000'000'000
                                      : static_cast<int>(std::ceil(t_formula));
    // Definition-of-parameters constraint, checked in logs to avoid overflow.
    if (s.iteration_cap * std::log(9.0) + std::log(eps_in) >= std::log(0.2))
      throw InvalidParameter("boost: 9^T * eps_in >= 1/5");
  } else {
    s.psi = psi_override > 0 ? psi_override : 0.05;
    for (int i = 0; i <= k; ++i) {
      // Geometric surrogate for Eq.(1); /4^{i+2} keeps every level's
      // returned-matching floor above its psi_i bar, level 0 included.
      s.psi_i.push_back(s.psi / std::pow(4.0, i + 2));
      s.delta_i.push_back(s.psi / std::pow(2.0, i + 1));
    }
    double sum_inv = 0;
    for (int i = 0; i < k; ++i) sum_inv += 1.0 / s.psi_i[i];
    double t_formula = 4.0 * (k + 1) * std::max(1.0, sum_inv) + k + 2;
    s.iteration_cap =
        static_cast<int>(std::min(t_formula, 500.0 * (k + 1)));
  }
  return s;
}

LayerAssignment LayerAssignment::sample(Vertex n, int k, std::uint64_t seed) {
  LayerAssignment la;
  la.seed = seed;
  la.num_layers = 2 * k + 2;
  la.layer.resize(n);
  Rng rng(seed);
  for (Vertex v = 0; v < n; ++v)
    la.layer[v] = static_cast<std::int16_t>(rand_below(rng, la.num_layers));
  return la;
}

LargeMatchBackend::Result OracleBackend::large_match(
    std::shared_ptr<const GraphAccess> layered, std::function<bool(Vertex)> member,
    std::uint64_t* membership_counter, double delta, double eps, Rng& rng) {
  PrepParams pp = PrepParams::make(layered->size(), eps, delta, preset_);
  auto st = preprocess(*layered, std::move(member), membership_counter, pp, rng);
  if (!st) return {true, nullptr};
  return {false,
          std::make_shared<PrepStateMatch>(std::move(*st), std::move(layered))};
}

LargeMatchBackend::Result ExplicitBackend::large_match(
    std::shared_ptr<const GraphAccess> layered, std::function<bool(Vertex)> member,
    std::uint64_t* membership_counter, double delta, double eps, Rng& rng) {
  (void)eps;
  (void)rng;
  Vertex n = layered->size();
  std::vector<Vertex> members;
  for (Vertex v = 0; v < n; ++v) {
    if (membership_counter) ++*membership_counter;
    if (member(v)) members.push_back(v);
  }
  // Exact maximum matching of the induced layered subgraph.
  QueryGraph sub(n);
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      if (layered->peek(members[i], members[j]))
        sub.set_edge(members[i], members[j], true);
  Matching m = bounded_augmentation_matching(sub, -1);
  if (m.size() < delta * n) return {true, nullptr};
  return {false, std::make_shared<ExplicitMatch>(std::move(m.mate))};
}

// Shared template state. Handles returned to callers capture it, so it owns
// everything the alive/candidate recursions and the output walk touch.
struct Augmenter::Core {
  const GraphAccess* g = nullptr;
  std::shared_ptr<const LayerAssignment> layers;
  MatchHandlePtr match_in;
  BoostSchedule sched;

  struct Record {
    int level;              // backtracking for layer 2*level
    MatchHandlePtr lambda;  // the popped level-`level` oracle
  };
  std::vector<Record> records;
  mutable std::vector<std::vector<std::int8_t>> alive_memo;  // [prefix][v]
  std::uint64_t membership_calls = 0;

  int layer(Vertex v) const { return (*layers)(v); }
  Vertex mate_in(Vertex v) const { return match_in->mate(v); }

  // V_H membership.
  bool relevant(Vertex v) const {
    int l = layer(v);
    Vertex m = mate_in(v);
    int top = 2 * sched.k + 1;
    if (m == kNoVertex) return l == 0 || l == top;
    int lm = layer(m);
    if (l % 2 == 1 && l >= 1 && l <= top - 2) return lm == l + 1;
    if (l % 2 == 0 && l >= 2 && l <= top - 1) return lm == l - 1;
    return false;
  }

  // Was x in the candidate set killed by record r (levels fixed by r)?
  bool in_killed_candidates(std::size_t r, Vertex x) const {
    const Record& rec = records[r];
    if (layer(x) != 2 * rec.level + 2) return false;
    if (!alive_after(r, x)) return false;
    Vertex m = mate_in(x);
    if (m == kNoVertex) return false;
    return rec.lambda->query(m).has_value();
  }

  // Alive state after the first `prefix` backtracking records.
  bool alive_after(std::size_t prefix, Vertex v) const {
    if (alive_memo.size() <= prefix) alive_memo.resize(prefix + 1);
    auto& memo = alive_memo[prefix];
    if (memo.empty()) memo.assign(g->size(), -1);
    if (memo[v] >= 0) return memo[v] == 1;
    bool res;
    if (prefix == 0) {
      res = relevant(v);
    } else {
      const Record& rec = records[prefix - 1];
      int l = layer(v);
      if (l == 2 * rec.level + 2 && in_killed_candidates(prefix - 1, v)) {
        res = false;
      } else if (l == 2 * rec.level + 1) {
        Vertex m = mate_in(v);
        res = (m == kNoVertex || !in_killed_candidates(prefix - 1, m)) &&
              alive_after(prefix - 1, v);
      } else {
        res = alive_after(prefix - 1, v);
      }
    }
    memo[v] = res ? 1 : 0;
    return res;
  }

  bool alive_now(Vertex v) const { return alive_after(records.size(), v); }

  // Candidate set C_{2i+2} for the upcoming iteration at stack level i.
  bool candidate_now(Vertex v, int i, const MatchHandle* lambda_i) const {
    if (layer(v) != 2 * i + 2) return false;
    if (!alive_now(v)) return false;
    if (i == -1) return true;
    Vertex m = mate_in(v);
    if (m == kNoVertex) return false;
    return lambda_i->query(m).has_value();
  }
};

namespace {

// Oracle for M^out: M^in with every complete layered path flipped.
class WalkMatch final : public MatchHandle {
 public:
  WalkMatch(std::shared_ptr<Augmenter::Core> core,
            std::vector<MatchHandlePtr> lambda)
      : core_(std::move(core)), lambda_(std::move(lambda)) {
    known_.assign(core_->g->size(), 0);
    cache_.resize(core_->g->size());
  }

  MatchAnswer query(Vertex v) const override {
    if (known_[v]) return cache_[v];
    Vertex u = out_mate(v);
    MatchAnswer a = u == kNoVertex ? MatchAnswer{} : MatchAnswer{make_edge(v, u)};
    known_[v] = 1;
    cache_[v] = a;
    return a;
  }

 private:
  // Walk upward through M^{lambda_lvl} / M^in from an even-layer vertex;
  // true iff the alternating chain reaches layer 2k+1.
  bool chain_up(Vertex from_even, int from_level) const {
    Vertex x = from_even;
    for (int lvl = from_level; lvl <= core_->sched.k; ++lvl) {
      Vertex w = lambda_[lvl]->mate(x);
      if (w == kNoVertex) return false;
      if (lvl == core_->sched.k) return true;
      x = core_->mate_in(w);
      if (x == kNoVertex) return false;
    }
    return true;
  }

  Vertex out_mate(Vertex v) const {
    int k = core_->sched.k;
    int top = 2 * k + 1;
    int l = core_->layer(v);
    Vertex mi = core_->mate_in(v);

    if (mi == kNoVertex) {
      if (l != 0 && l != top) return kNoVertex;
      if (l == 0) {
        Vertex w = lambda_[0]->mate(v);
        if (w == kNoVertex) return kNoVertex;
        // continue the walk from the mate's M^in partner upward
        if (k == 0) return w;
        Vertex x = core_->mate_in(w);
        if (x == kNoVertex) return kNoVertex;
        return chain_up(x, 1) ? w : kNoVertex;
      }
      // l == top: nested matchings complete downwards by construction
      return lambda_[k]->mate(v);
    }

    // Matched input edge; flips only when it sits at layers (2j-1, 2j) on a
    // complete path.
    int lm = core_->layer(mi);
    Vertex even_end = kNoVertex;
    if (l % 2 == 0 && l >= 2 && l <= top - 1 && lm == l - 1)
      even_end = v;
    else if (lm % 2 == 0 && lm >= 2 && lm <= top - 1 && l == lm - 1)
      even_end = mi;
    if (even_end == kNoVertex) return mi;  // untouched by any path

    int j = core_->layer(even_end) / 2;
    if (!chain_up(even_end, j)) return mi;
    if (v == even_end) return lambda_[j]->mate(v);
    return lambda_[j - 1]->mate(v);
  }

  std::shared_ptr<Augmenter::Core> core_;
  std::vector<MatchHandlePtr> lambda_;
  mutable std::vector<std::int8_t> known_;
  mutable std::vector<MatchAnswer> cache_;
};

}  // namespace

Augmenter::Augmenter(const GraphAccess& g, MatchHandlePtr match_in,
                     BoostSchedule sched, LargeMatchBackend& backend,
                     std::uint64_t seed)
    : backend_(&backend), rng_(seed) {
  core_ = std::make_shared<Core>();
  core_->g = &g;
  core_->match_in = std::move(match_in);
  core_->sched = std::move(sched);
  core_->layers = std::make_shared<LayerAssignment>(
      LayerAssignment::sample(g.size(), core_->sched.k, rng_()));
  stats_.backtracks_per_level.assign(core_->sched.k + 1, 0);
}

void Augmenter::override_layers(LayerAssignment la) {
  core_->layers = std::make_shared<LayerAssignment>(std::move(la));
  core_->alive_memo.clear();
}

bool Augmenter::relevant(Vertex v) const { return core_->relevant(v); }
bool Augmenter::alive_now(Vertex v) const { return core_->alive_now(v); }
int Augmenter::stack_level() const {
  return static_cast<int>(lambda_.size()) - 1;
}
const LayerAssignment& Augmenter::layers() const { return *core_->layers; }

bool Augmenter::candidate(Vertex v) const {
  int i = stack_level();
  return core_->candidate_now(v, i, i >= 0 ? lambda_[i].get() : nullptr);
}

AugmentResult Augmenter::run() {
  const BoostSchedule& sched = core_->sched;
  int k = sched.k;
  AugmentResult out;
  int t = 0;

  for (;;) {
    int i = stack_level();
    if (i == k) {
      out.success = true;
      out.match_out = std::make_shared<WalkMatch>(core_, lambda_);
      break;
    }
    ++t;
    if (t > sched.iteration_cap)
      throw IterationCapExceeded("augment: iteration cap " +
                                 std::to_string(sched.iteration_cap));

    double eps_prep = 2.0 * sched.eps_t(t - 1);
    double delta = sched.delta_i[i + 1];
    auto core = core_;
    MatchHandlePtr lambda_i = i >= 0 ? lambda_[i] : nullptr;
    auto member = [core, i, lambda_i](Vertex v) -> bool {
      if (core->candidate_now(v, i, lambda_i.get())) return true;
      return core->layer(v) == 2 * i + 3 && core->alive_now(v);
    };
    auto view = std::make_shared<LayerFilteredView>(*core_->g, core_->layers,
                                                    2 * i + 2);
    auto res = backend_->large_match(view, member, &core_->membership_calls,
                                     delta, eps_prep, rng_);
    ++stats_.iterations;
    if (!res.bottom) {
      lambda_.push_back(res.handle);
      ++stats_.forwards;
    } else if (i == -1) {
      out.success = false;
      break;
    } else {
      ++stats_.backtracks;
      ++stats_.backtracks_per_level[i];
      int cap = static_cast<int>(std::ceil(1.0 / sched.psi_i[i]));
      if (stats_.backtracks_per_level[i] > cap)
        throw IterationCapExceeded("augment: backtracking cap at level " +
                                   std::to_string(i));
      core_->records.push_back(Core::Record{i, lambda_[i]});
      lambda_.pop_back();
    }
  }

  out.eps_out = sched.eps_t(t);
  stats_.membership_calls = core_->membership_calls;
  out.stats = stats_;
  finished_ = true;
  return out;
}

AugmentResult augment(const GraphAccess& g, MatchHandlePtr match_in, int k,
                      double gamma, double eps_in, Preset preset,
                      LargeMatchBackend& backend, std::uint64_t seed) {
  BoostSchedule sched = BoostSchedule::make(k, gamma, eps_in, preset);
  Augmenter aug(g, std::move(match_in), std::move(sched), backend, seed);
  return aug.run();
}

}  // namespace submatch
