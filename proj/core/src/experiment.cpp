#include "submatch/experiment.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "submatch/dynamic.hpp"
#include "submatch/exact.hpp"

namespace submatch {

namespace {

std::string preset_name(Preset p) {
  return p == Preset::Paper ? "paper" : "desk";
}
Preset preset_from(const std::string& s) {
  if (s == "paper") return Preset::Paper;
  if (s == "desk") return Preset::Desk;
  throw InvalidParameter("unknown preset: " + s);
}

}  // namespace

nlohmann::json ExperimentSpec::to_json() const {
  nlohmann::json j;
  j["pipeline"] = pipeline;
  j["preset"] = preset_name(preset);
  j["seed"] = seed;
  j["instance"] = {{"kind", instance.kind}, {"n", instance.n},
                   {"p", instance.p},       {"k", instance.k},
                   {"count", instance.count}, {"seed", instance.seed}};
  j["graph_path"] = graph_path;
  j["stream_path"] = stream_path;
  j["stream"] = {{"n", stream.n},
                 {"updates", stream.updates},
                 {"insert_rate", stream.insert_rate},
                 {"checkpoint_every", stream.checkpoint_every},
                 {"seed", stream.seed}};
  j["checkpoint_every"] = checkpoint_every;
  j["exact"] = exact;
  j["gamma"] = gamma;
  j["eps"] = eps;
  j["delta_in"] = delta_in;
  j["eps_param"] = eps_param;
  j["a_fraction"] = a_fraction;
  j["deamortized"] = deamortized;
  j["budget"] = budget;
  return j;
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
  ExperimentSpec s;
  s.pipeline = j.at("pipeline").get<std::string>();
  s.preset = preset_from(j.value("preset", "desk"));
  s.seed = j.value("seed", std::uint64_t{1});
  if (j.contains("instance")) {
    const auto& i = j["instance"];
    s.instance.kind = i.value("kind", "");
    s.instance.n = i.value("n", 0);
    s.instance.p = i.value("p", 0.25);
    s.instance.k = i.value("k", 1);
    s.instance.count = i.value("count", 0);
    s.instance.seed = i.value("seed", std::uint64_t{1});
  }
  s.graph_path = j.value("graph_path", "");
  s.stream_path = j.value("stream_path", "");
  if (j.contains("stream")) {
    const auto& t = j["stream"];
    s.stream.n = t.value("n", 0);
    s.stream.updates = t.value("updates", 0);
    s.stream.insert_rate = t.value("insert_rate", 0.7);
    s.stream.checkpoint_every = t.value("checkpoint_every", 0);
    s.stream.seed = t.value("seed", std::uint64_t{1});
  }
  s.checkpoint_every = j.value("checkpoint_every", 0);
  s.exact = j.value("exact", false);
  s.gamma = j.value("gamma", 0.2);
  s.eps = j.value("eps", 0.2);
  s.delta_in = j.value("delta_in", 0.25);
  s.eps_param = j.value("eps_param", 0.25);
  s.a_fraction = j.value("a_fraction", 1.0);
  s.deamortized = j.value("deamortized", false);
  s.budget = j.value("budget", std::uint64_t{0});
  return s;
}

std::uint64_t ExperimentSpec::hash() const {
  std::string dump = to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool hash_member(Vertex v, std::uint64_t seed, double fraction) {
  if (fraction >= 1.0) return true;
  if (fraction <= 0.0) return false;
  std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (std::uint64_t)(v + 1));
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return static_cast<double>(x) / static_cast<double>(UINT64_MAX) < fraction;
}

double fit_scaling(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw InsufficientData("fit_scaling: need at least 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : points) {
    double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double m = static_cast<double>(points.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

namespace {

constexpr const char* kCsvVersion = "# submatch-report v1";

struct CsvWriter {
  std::ostringstream out;
  explicit CsvWriter(const std::string& columns) {
    out << kCsvVersion << "\n" << columns << "\n";
  }
  template <typename... Ts>
  void row(const Ts&... vals) {
    bool first = true;
    ((out << (first ? "" : ","), out << vals, first = false), ...);
    out << "\n";
  }
};

QueryGraph load_instance(const ExperimentSpec& spec) {
  if (!spec.graph_path.empty()) return read_graph_file(spec.graph_path);
  if (spec.instance.kind.empty())
    throw InvalidParameter("experiment: no instance given");
  return generate_graph(spec.instance);
}

int census_size(const MatchHandle& h, Vertex n) {
  int matched = 0;
  for (Vertex v = 0; v < n; ++v)
    if (h.query(v).has_value()) ++matched;
  return matched / 2;
}

// Consistency + validity of oracle answers over the whole vertex set.
template <typename QueryFn>
bool oracle_answers_consistent(Vertex n, const GraphAccess& g, QueryFn&& q) {
  for (Vertex v = 0; v < n; ++v) {
    MatchAnswer a = q(v);
    if (!a) continue;
    if (a->u != v && a->v != v) return false;
    Vertex u = a->u == v ? a->v : a->u;
    if (!g.peek(std::min(v, u), std::max(v, u))) return false;
    MatchAnswer b = q(u);
    if (!b || b->u != a->u || b->v != a->v) return false;
  }
  return true;
}

RunReport run_gmm(const ExperimentSpec& spec) {
  RunReport rep;
  QueryGraph g = load_instance(spec);
  Vertex n = g.size();
  Rng rng(spec.seed);
  std::uint64_t m2 = 0;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (g.peek(u, v)) ++m2;
  double dbar = n > 0 ? std::max(1.0, 2.0 * m2 / n) : 1.0;
  GmmParams params = GmmParams::make(spec.preset, spec.eps_param, dbar);
  auto oracle = build_gmm_oracle(g, params, rng);

  int matched = 0;
  for (Vertex v = 0; v < n; ++v)
    if (oracle->query_match(v).has_value()) ++matched;

  CsvWriter csv("matching_size,probes,membership_calls,ell");
  csv.row(matched / 2, g.probe_count(), g.membership_count(), oracle->ell());
  rep.csv = csv.out.str();
  rep.summary["pipeline"] = "gmm-lca";
  rep.summary["matching_size"] = matched / 2;
  rep.summary["probes"] = g.probe_count();
  if (spec.exact) {
    bool ok = oracle_answers_consistent(
        n, g, [&](Vertex v) { return oracle->query_match(v); });
    Matching ref = gmm_reference(g, oracle->permutation());
    // with a finite ell the oracle may only drop answers, never invent them
    rep.summary["reference_size"] = ref.size();
    rep.invariant_violation = !ok;
  }
  return rep;
}

RunReport run_induced(const ExperimentSpec& spec) {
  RunReport rep;
  QueryGraph g = load_instance(spec);
  Vertex n = g.size();
  Rng rng(spec.seed);
  std::uint64_t mem_calls = 0;
  std::uint64_t mseed = spec.seed * 7919 + 13;
  auto member = [&spec, mseed](Vertex v) {
    return hash_member(v, mseed, spec.a_fraction);
  };
  PrepParams pp = PrepParams::make(n, spec.eps_param, spec.delta_in, spec.preset);
  auto state = preprocess(g, member, &mem_calls, pp, rng);

  CsvWriter csv("case,matching_size,probes,membership_calls,rounds");
  if (!state) {
    csv.row("bottom", 0, g.probe_count(), mem_calls, pp.T);
    rep.summary["case"] = "bottom";
  } else {
    int size = 0;
    for (Vertex v = 0; v < n; ++v)
      if (state->query(v).has_value()) ++size;
    size /= 2;
    const char* kind =
        state->kind == PrepState::Case::Explicit ? "explicit" : "implicit";
    csv.row(kind, size, g.probe_count(), mem_calls, state->rounds_used);
    rep.summary["case"] = kind;
    rep.summary["matching_size"] = size;
    if (spec.exact) {
      bool ok = oracle_answers_consistent(
          n, g, [&](Vertex v) { return state->query(v); });
      for (Vertex v = 0; v < n && ok; ++v) {
        MatchAnswer a = state->query(v);
        if (a && !(member(a->u) && member(a->v))) ok = false;
      }
      rep.invariant_violation = !ok;
    }
  }
  rep.summary["pipeline"] = "induced-oracle";
  rep.summary["probes"] = g.probe_count();
  rep.summary["membership_calls"] = mem_calls;
  rep.csv = csv.out.str();
  return rep;
}

RunReport run_augment(const ExperimentSpec& spec) {
  RunReport rep;
  PlantedInstance inst = generate_planted_aug_paths(
      spec.instance.n, spec.instance.k, spec.instance.count, spec.instance.p,
      spec.instance.seed);
  Vertex n = inst.graph.size();
  auto match_in = std::make_shared<ExplicitMatch>(inst.mate);
  int in_size = 0;
  for (Vertex v = 0; v < n; ++v)
    if (inst.mate[v] != kNoVertex) ++in_size;
  in_size /= 2;

  OracleBackend backend(spec.preset);
  AugmentResult res = augment(inst.graph, match_in, spec.instance.k, spec.gamma,
                              0.02, spec.preset, backend, spec.seed);
  CsvWriter csv("success,in_size,out_size,iterations,backtracks,probes");
  int out_size = res.success ? census_size(*res.match_out, n) : in_size;
  csv.row(res.success ? 1 : 0, in_size, out_size, res.stats.iterations,
          res.stats.backtracks, inst.graph.probe_count());
  rep.csv = csv.out.str();
  rep.summary["pipeline"] = "augment";
  rep.summary["success"] = res.success;
  rep.summary["in_size"] = in_size;
  rep.summary["out_size"] = out_size;
  if (spec.exact && res.success) {
    bool ok = oracle_answers_consistent(
        n, inst.graph, [&](Vertex v) { return res.match_out->query(v); });
    // matched vertices of M^in stay matched
    for (Vertex v = 0; v < n && ok; ++v)
      if (inst.mate[v] != kNoVertex && !res.match_out->query(v)) ok = false;
    rep.invariant_violation = !ok;
  }
  return rep;
}

RunReport run_near_optimal(const ExperimentSpec& spec) {
  RunReport rep;
  QueryGraph g = load_instance(spec);
  Vertex n = g.size();
  Rng rng(spec.seed);
  NearOptimalParams np = NearOptimalParams::make(spec.gamma, spec.preset);
  NearOptimalResult res = near_optimal_oracle(g, np, rng);
  int size = census_size(*res.handle, n);
  double est = estimate_size(*res.handle, spec.gamma, n, np.c_s, rng);

  CsvWriter csv("round,k,success");
  for (const auto& e : res.log) csv.row(e.round, e.k, e.success ? 1 : 0);
  rep.csv = csv.out.str();
  rep.summary["pipeline"] = "near-optimal";
  rep.summary["matching_size"] = size;
  rep.summary["estimate"] = est;
  rep.summary["rounds"] = res.rounds;
  rep.summary["calls"] = res.calls;
  rep.summary["probes"] = g.probe_count();
  if (spec.exact) {
    rep.summary["mu_exact"] = mu_exact(g);
    bool ok = oracle_answers_consistent(
        n, g, [&](Vertex v) { return res.handle->query(v); });
    rep.invariant_violation = !ok;
  }
  return rep;
}

RunReport run_dynamic_family(const ExperimentSpec& spec, bool baseline) {
  RunReport rep;
  QueryGraph initial =
      spec.graph_path.empty()
          ? QueryGraph(spec.stream.n > 0 ? spec.stream.n : spec.instance.n)
          : read_graph_file(spec.graph_path);
  Vertex n = initial.size();
  std::vector<StreamItem> stream = spec.stream_path.empty()
                                       ? generate_stream(spec.stream)
                                       : read_stream_file(spec.stream_path);

  DynamicParams dp = DynamicParams::make(spec.eps, spec.preset);
  dp.deamortized = spec.deamortized;
  dp.work_budget = spec.budget;
  dp.seed = spec.seed;

  std::unique_ptr<DynamicMatcher> dyn;
  std::unique_ptr<BaselineMatcher> base;
  if (baseline)
    base = std::make_unique<BaselineMatcher>(n, spec.eps);
  else
    dyn = std::make_unique<DynamicMatcher>(n, dp);

  // Feed any initial edges as inserts before the stream.
  for (const Edge& e : edge_list(initial)) {
    if (baseline)
      base->update(UpdateOp::Insert, e.u, e.v);
    else
      dyn->update(UpdateOp::Insert, e.u, e.v);
  }

  CsvWriter csv("update_index,mu_star,exact_mu,probes_since_last,phase_type");
  std::uint64_t last_work = 0;
  std::int64_t idx = 0;
  bool violated = false;
  auto emit_checkpoint = [&]() {
    double mu_star =
        baseline ? base->matching_size() : dyn->published();
    const DynamicGraph& dg = baseline ? base->graph() : dyn->graph();
    std::uint64_t work = baseline ? dg.graph().probe_count() : dyn->work();
    std::string phase =
        baseline ? "baseline"
                 : (dyn->phase().type == PhaseInfo::Type::I ? "I" : "II");
    if (spec.exact) {
      int mu = mu_exact(dg.graph());
      csv.row(idx, mu_star, mu, work - last_work, phase);
      if (!baseline) {
        if (!oracle_answers_consistent(n, dg.graph(), [&](Vertex v) {
              return dyn->query_match(v);
            }))
          violated = true;
      } else {
        Matching m{base->mate()};
        if (!m.is_valid(dg.graph())) violated = true;
      }
    } else {
      csv.row(idx, mu_star, "", work - last_work, phase);
    }
    last_work = work;
  };

  for (const StreamItem& item : stream) {
    if (item.kind == StreamItem::Kind::Checkpoint) {
      emit_checkpoint();
      continue;
    }
    ++idx;
    if (baseline)
      base->update(item.update.op, item.update.u, item.update.v);
    else
      dyn->update(item.update.op, item.update.u, item.update.v);
    if (spec.checkpoint_every > 0 && idx % spec.checkpoint_every == 0)
      emit_checkpoint();
  }

  rep.csv = csv.out.str();
  rep.summary["pipeline"] = baseline ? "baseline" : "dynamic";
  rep.summary["updates"] = idx;
  rep.summary["final_mu_star"] =
      baseline ? base->matching_size() : dyn->published();
  if (!baseline) rep.summary["budget_underruns"] = dyn->budget_underruns();
  rep.invariant_violation = violated;
  return rep;
}

}  // namespace

RunReport run_experiment(const ExperimentSpec& spec) {
  auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  if (spec.pipeline == "gmm-lca")
    rep = run_gmm(spec);
  else if (spec.pipeline == "induced-oracle")
    rep = run_induced(spec);
  else if (spec.pipeline == "augment")
    rep = run_augment(spec);
  else if (spec.pipeline == "near-optimal")
    rep = run_near_optimal(spec);
  else if (spec.pipeline == "dynamic")
    rep = run_dynamic_family(spec, false);
  else if (spec.pipeline == "baseline")
    rep = run_dynamic_family(spec, true);
  else
    throw InvalidParameter("unknown pipeline: " + spec.pipeline);

  rep.summary["seed"] = spec.seed;
  rep.summary["spec_hash"] = spec.hash();
  rep.summary["preset"] = spec.preset == Preset::Paper ? "paper" : "desk";
  auto t1 = std::chrono::steady_clock::now();
  rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rep;
}

}  // namespace submatch
