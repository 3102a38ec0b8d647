#pragma once

#include <vector>

#include "gpen/gauge.hpp"
#include "gpen/loss.hpp"
#include "gpen/types.hpp"

namespace gpen {

struct FbConfig {
  int max_iters = 50000;
  double step = 0;        // 0 = auto (1/L with L = ‖X‖²/n for quadratic loss)
  double tol = 1e-10;     // stop when ‖x − x⁺‖ <= tol·max(1, ‖x‖)
  int trace_every = 0;    // record residual every k iterations (0 = off)
  ProxOptions prox;
};

struct FbResult {
  Vec x;
  int iterations = 0;
  double residual = 0;
  bool converged = false;
  double step_used = 0;
  double objective = 0;
  std::vector<double> residual_trace;
};

/// Largest squared singular value of X by power iteration.
double spectral_norm_sq(const Mat& x, int iters = 200, std::uint64_t seed = 7);

/// V_n(x) = (1/n) F(Xx, y) + λ J(x).
double objective_value(const Mat& x_design, const Vec& y, const Gauge& j, double lambda,
                       const Loss& loss, const Vec& x);

/// Penalized estimator by forward-backward splitting:
/// x⁺ = prox_{step·λ·J}(x − (step/n) Xᵀ∇F(Xx, y)).
/// Non-convergence is reported through the result, carrying the best iterate.
FbResult solve_penalized(const Mat& x_design, const Vec& y, const Gauge& j, double lambda,
                         const Loss& loss, const FbConfig& cfg = {});

/// ‖θ − prox_{step·λ·J}(θ − (step/n) Xᵀ∇F(Xθ, y))‖; zero iff θ minimizes V_n.
double optimality_residual(const Mat& x_design, const Vec& y, const Gauge& j, double lambda,
                           const Loss& loss, const Vec& theta, double step,
                           const ProxOptions& prox = {});

}  // namespace gpen
