#pragma once

#include <string>

#include "submatch/io.hpp"

namespace submatch {

struct GenSpec {
  std::string kind;  // erdos-renyi | planted-perfect-bipartite |
                     // planted-aug-paths | disjoint-edges
  Vertex n = 0;
  double p = 0.25;   // edge probability / cross density
  int k = 1;         // augmenting-path half-length
  int count = 0;     // planted path count (0: as many as fit)
  std::uint64_t seed = 1;
};

QueryGraph generate_graph(const GenSpec& spec);

/// planted-aug-paths instance together with the emitted matching it is
/// planted against and the planted path count.
struct PlantedInstance {
  QueryGraph graph;
  std::vector<Vertex> mate;
  int planted = 0;
};
PlantedInstance generate_planted_aug_paths(Vertex n, int k, int count,
                                           double cross_p, std::uint64_t seed);

struct StreamSpec {
  Vertex n = 0;
  int updates = 0;
  double insert_rate = 0.7;  // delete rate is the complement
  int checkpoint_every = 0;  // 0: single final checkpoint
  std::uint64_t seed = 1;
};

/// Incremental random update-stream writer; keeps the evolving edge set so
/// composed segments stay consistent.
class StreamBuilder {
 public:
  explicit StreamBuilder(Vertex n, std::uint64_t seed);
  void emit(int updates, double insert_rate, int checkpoint_every = 0);
  void checkpoint();
  const std::vector<StreamItem>& items() const { return items_; }
  std::vector<StreamItem> take() { return std::move(items_); }

 private:
  bool random_absent_pair(Vertex& u, Vertex& v);
  Vertex n_;
  Rng rng_;
  std::vector<Edge> present_;
  std::vector<std::uint8_t> has_;  // n*n bitmapless flat flags
  std::vector<StreamItem> items_;
};

std::vector<StreamItem> generate_stream(const StreamSpec& spec);

}  // namespace submatch
