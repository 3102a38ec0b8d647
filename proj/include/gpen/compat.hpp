#pragma once

#include <optional>

#include "gpen/gauge.hpp"
#include "gpen/types.hpp"

namespace gpen {

enum class CompatMode { BruteForce, LocalSearch };

struct CompatSearch {
  int restarts = 16;
  int grid_points = 21;    // per axis, brute-force mode (odd keeps 0 and ±1)
  int descent_iters = 300;
  std::uint64_t seed = 0;
  std::optional<CompatMode> mode;  // default: BruteForce iff p <= 4
};

struct CompatQuery {
  Mat x;                 // n x p design
  Gauge j;
  Decomposition decomp;  // supplies T and ‖P_T‖_{2→J}
  double c = 3.0;
  CompatSearch search;
};

struct CompatResult {
  double estimate = 0;
  CompatMode mode = CompatMode::LocalSearch;
  long evaluations = 0;
};

/// Ratio ‖P_T‖_{2→J} ‖Xω‖₂ / (√n (J(ω_T) − J(ω_S)/c)) at a given ω;
/// +inf when ω is infeasible (J(ω_S) >= c·J(ω_T) up to a 1e-9 margin, or the
/// denominator falls below 1e-12).
double compatibility_ratio(const CompatQuery& q, const Vec& omega);

/// Minimum found of the ratio over feasible ω. The value upper-bounds the
/// true infimum; mode reports the certificate strength (brute-force grid on
/// p <= 4 is the reference oracle).
CompatResult compatibility_factor(const CompatQuery& q);

}  // namespace gpen
