#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "submatch/generate.hpp"
#include "submatch/preset.hpp"

namespace submatch {

/// Fully serializable experiment description; replaying a spec reproduces
/// its report files byte for byte.
struct ExperimentSpec {
  std::string pipeline;  // gmm-lca | induced-oracle | augment | near-optimal |
                         // dynamic | baseline
  Preset preset = Preset::Desk;
  std::uint64_t seed = 1;

  GenSpec instance;         // generator instance (kind empty: graph_path)
  std::string graph_path;   // explicit input graph
  std::string stream_path;  // explicit update stream (dynamic/baseline)
  StreamSpec stream;        // generated stream when stream_path is empty

  int checkpoint_every = 0;
  bool exact = false;  // ground-truth verification at checkpoints
  double gamma = 0.2;
  double eps = 0.2;        // dynamic/baseline epsilon
  double delta_in = 0.25;  // induced-oracle promise
  double eps_param = 0.25; // induced-oracle epsilon
  double a_fraction = 1.0; // membership density for induced-oracle runs
  bool deamortized = false;
  std::uint64_t budget = 0;

  nlohmann::json to_json() const;
  static ExperimentSpec from_json(const nlohmann::json& j);
  std::uint64_t hash() const;  // FNV-1a over the canonical dump
};

struct RunReport {
  std::string csv;         // versioned header plus one row per checkpoint
  nlohmann::json summary;  // deterministic; excludes timing
  bool invariant_violation = false;
  double wall_ms = 0;  // never written into report files
};

RunReport run_experiment(const ExperimentSpec& spec);

/// Least-squares slope of log(y) against log(x); needs >= 3 points.
double fit_scaling(const std::vector<std::pair<double, double>>& points);

/// Seeded membership predicate selecting roughly `fraction` of vertices.
bool hash_member(Vertex v, std::uint64_t seed, double fraction);

}  // namespace submatch
