#pragma once

#include <algorithm>
#include <cmath>

namespace submatch {

/// Constant regimes for every parameterized module. "Paper" uses the
/// literal formulas; "Desk" rescales the multiplicative constants so size
/// guarantees are observable at n up to a few thousand.
enum class Preset { Paper, Desk };

/// log with configurable base, floored away from zero so parameter
/// formulas stay positive for tiny n.
inline double log_param(double x, double base = 2.0) {
  return std::log(std::max(x, 2.0)) / std::log(base);
}

}  // namespace submatch
