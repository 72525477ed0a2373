#pragma once

#include "submatch/augment.hpp"

namespace submatch {

struct NearOptimalParams {
  double gamma = 0.2;
  double eps_prime = 0.125;  // initial eps_in handed to the first Augment
  Preset preset = Preset::Desk;
  int k_cap = -1;        // cap on ceil(1/gamma) path half-lengths (-1: none)
  double c_s = 48.0;     // estimate_size sample multiplier
  int max_rounds = 0;    // 0: derived from n
  double psi_override = 0;
  double log_base = 2.0;

  static NearOptimalParams make(double gamma, Preset preset) {
    NearOptimalParams p;
    p.gamma = gamma;
    p.preset = preset;
    return p;
  }
};

struct NearOptimalLogEntry {
  int round;
  int k;  // path half-length of this Augment call
  bool success;
};

struct NearOptimalResult {
  MatchHandlePtr handle;
  double eps_final = 0;
  int rounds = 0;
  int calls = 0;
  int successes = 0;
  std::vector<NearOptimalLogEntry> log;
};

/// Repeatedly boost from the empty matching across path lengths 0..k until
/// one full round of Failures.
NearOptimalResult near_optimal_oracle(const GraphAccess& g,
                                      const NearOptimalParams& params,
                                      Rng& rng);

/// Sampled matched-vertex fraction scaled to a size estimate; switches to a
/// full census when the sample count covers the vertex set.
double estimate_size(const MatchHandle& handle, double gamma, Vertex n,
                     double c_s, Rng& rng);

}  // namespace submatch
