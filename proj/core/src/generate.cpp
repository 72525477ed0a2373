#include "submatch/generate.hpp"

#include <cmath>

namespace submatch {

namespace {

QueryGraph disjoint_edges(Vertex n) {
  QueryGraph g(n);
  for (Vertex v = 0; v + 1 < n; v += 2) g.set_edge(v, v + 1, true);
  return g;
}

QueryGraph erdos_renyi(Vertex n, double p, std::uint64_t seed) {
  QueryGraph g(n);
  Rng rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (coin(rng) < p) g.set_edge(u, v, true);
  return g;
}

// Perfect matching i <-> s+i plus extra random cross edges.
QueryGraph planted_perfect_bipartite(Vertex n, double extra_p,
                                     std::uint64_t seed) {
  if (n % 2 != 0) throw InvalidParameter("planted-perfect-bipartite: n odd");
  Vertex s = n / 2;
  QueryGraph g(n);
  Rng rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (Vertex i = 0; i < s; ++i) g.set_edge(i, s + i, true);
  for (Vertex i = 0; i < s; ++i)
    for (Vertex j = 0; j < s; ++j)
      if (i != j && coin(rng) < extra_p) g.set_edge(i, s + j, true);
  return g;
}

}  // namespace

PlantedInstance generate_planted_aug_paths(Vertex n, int k, int count,
                                           double cross_p,
                                           std::uint64_t seed) {
  int stride = 2 * k + 2;
  int max_paths = n / stride;
  if (count <= 0 || count > max_paths) count = max_paths;
  PlantedInstance inst{QueryGraph(n), std::vector<Vertex>(n, kNoVertex), count};
  QueryGraph& g = inst.graph;
  Rng rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  auto pos = [&](int path, int i) { return path * stride + i; };
  for (int a = 0; a < count; ++a) {
    for (int i = 0; i + 1 < stride; ++i) g.set_edge(pos(a, i), pos(a, i + 1), true);
    for (int i = 1; i + 1 < stride; i += 2) {
      inst.mate[pos(a, i)] = pos(a, i + 1);
      inst.mate[pos(a, i + 1)] = pos(a, i);
    }
  }
  // Cross edges mirror the path structure: only (position 2i, position 2i+1)
  // pairs across paths, so every augmenting path keeps length 2k+1.
  for (int i = 0; i + 1 < stride; i += 2)
    for (int a = 0; a < count; ++a)
      for (int b = 0; b < count; ++b)
        if (a != b && coin(rng) < cross_p)
          g.set_edge(pos(a, i), pos(b, i + 1), true);

  // Filler: matched pairs away from every augmenting path.
  for (Vertex v = count * stride; v + 1 < n; v += 2) {
    g.set_edge(v, v + 1, true);
    inst.mate[v] = v + 1;
    inst.mate[v + 1] = v;
  }
  return inst;
}

QueryGraph generate_graph(const GenSpec& spec) {
  if (spec.n <= 0) throw InvalidParameter("generate: n must be positive");
  if (spec.kind == "disjoint-edges") return disjoint_edges(spec.n);
  if (spec.kind == "erdos-renyi") return erdos_renyi(spec.n, spec.p, spec.seed);
  if (spec.kind == "planted-perfect-bipartite")
    return planted_perfect_bipartite(spec.n, spec.p, spec.seed);
  if (spec.kind == "planted-aug-paths")
    return generate_planted_aug_paths(spec.n, spec.k, spec.count, spec.p,
                                      spec.seed)
        .graph;
  throw InvalidParameter("generate: unknown kind \"" + spec.kind + "\"");
}

StreamBuilder::StreamBuilder(Vertex n, std::uint64_t seed)
    : n_(n), rng_(seed) {
  has_.assign(static_cast<std::size_t>(n) * n, 0);
}

bool StreamBuilder::random_absent_pair(Vertex& u, Vertex& v) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vertex a = static_cast<Vertex>(rand_below(rng_, n_));
    Vertex b = static_cast<Vertex>(rand_below(rng_, n_));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!has_[static_cast<std::size_t>(a) * n_ + b]) {
      u = a;
      v = b;
      return true;
    }
  }
  return false;
}

void StreamBuilder::checkpoint() {
  items_.push_back(StreamItem{StreamItem::Kind::Checkpoint, {}});
}

void StreamBuilder::emit(int updates, double insert_rate,
                         int checkpoint_every) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int i = 0; i < updates; ++i) {
    bool insert = present_.empty() || coin(rng_) < insert_rate;
    Vertex u, v;
    if (insert && random_absent_pair(u, v)) {
      has_[static_cast<std::size_t>(u) * n_ + v] = 1;
      present_.push_back(Edge{u, v});
      items_.push_back(
          StreamItem{StreamItem::Kind::Update, Update{UpdateOp::Insert, u, v}});
    } else if (!present_.empty()) {
      std::size_t idx = rand_below(rng_, present_.size());
      Edge e = present_[idx];
      present_[idx] = present_.back();
      present_.pop_back();
      has_[static_cast<std::size_t>(e.u) * n_ + e.v] = 0;
      items_.push_back(StreamItem{StreamItem::Kind::Update,
                                  Update{UpdateOp::Delete, e.u, e.v}});
    } else {
      continue;  // nothing to do on an empty graph that cannot grow
    }
    if (checkpoint_every > 0 && (i + 1) % checkpoint_every == 0) checkpoint();
  }
}

std::vector<StreamItem> generate_stream(const StreamSpec& spec) {
  if (spec.n <= 0) throw InvalidParameter("stream: n must be positive");
  StreamBuilder b(spec.n, spec.seed);
  b.emit(spec.updates, spec.insert_rate, spec.checkpoint_every);
  if (spec.checkpoint_every <= 0) b.checkpoint();
  return b.take();
}

}  // namespace submatch
