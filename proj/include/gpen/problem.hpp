#pragma once

#include <string>

#include "gpen/gauge.hpp"
#include "gpen/types.hpp"

namespace gpen {

enum class PenaltyChoice { Lasso, Group, Analysis, LInf, Nuclear };
enum class DesignKind { GaussianNormalized, Identity, Custom };
enum class SignalKind { Sparse, GroupSparse, Saturated, LowRank };
enum class NoiseKind { Gaussian, ScaledRademacher };

struct ProblemSpec {
  PenaltyChoice penalty = PenaltyChoice::Lasso;
  Index n = 100;
  Index p = 32;
  Index p1 = 0, p2 = 0;     // Nuclear: ambient is p1*p2
  Index block_size = 4;     // K; blocks are contiguous, L = p / K
  DesignKind design = DesignKind::GaussianNormalized;
  Mat custom_design;        // used when design == Custom (normalization asserted)
  Mat analysis_d;           // D for the analysis penalty; defaults to identity
  SignalKind signal = SignalKind::Sparse;
  int sparsity = 4;
  int active_blocks = 2;
  int sat_size = 4;
  int rank = 2;
  double amplitude = 1.0;
  NoiseKind noise = NoiseKind::Gaussian;
  double sigma = 0.5;
  std::uint64_t seed = 0;

  Index ambient_dim() const { return penalty == PenaltyChoice::Nuclear ? p1 * p2 : p; }
  Index num_blocks() const { return block_size > 0 ? p / block_size : 0; }
};

struct Problem {
  Mat x;   // n x ambient design, normalization already enforced
  Vec x0;
  Vec xi;
  Vec y;   // X x0 + xi
  Gauge j;
  double sigma = 0;
};

Gauge make_gauge(const ProblemSpec& spec);

/// Deterministic given spec.seed. The design and signal use fixed streams so
/// that per-trial noise can be redrawn independently via draw_noise.
Problem generate_problem(const ProblemSpec& spec);

/// Noise vector for a given trial stream (stream 0 is the one used by
/// generate_problem itself).
Vec draw_noise(const ProblemSpec& spec, std::uint64_t trial);

}  // namespace gpen
