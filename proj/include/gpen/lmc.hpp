#pragma once

#include "gpen/gauge.hpp"
#include "gpen/loss.hpp"
#include "gpen/types.hpp"

namespace gpen {

struct LmcConfig {
  double step = 0;      // h; 0 = auto from the stability bound h·Lip(∇V^γ)/β < 1
  double gamma = 0;     // Moreau envelope parameter; 0 = auto
  int burn_in = 1000;
  int samples = 10000;
  std::uint64_t seed = 0;
  double stability_margin = 0.25;  // h = margin·β/Lip(∇V^γ)
  double divergence_norm = 1e9;    // overflow guard on ‖x‖
};

struct LmcResult {
  Vec mean;
  Vec mc_se;          // per-coordinate standard error by batch means
  Vec final_state;
  int steps = 0;
  double step_used = 0;
  double gamma_used = 0;
  double mean_potential = 0;  // average V_n over kept samples
};

/// Moreau envelope of J at x: min_u ‖u − x‖²/(2γ) + J(u).
double moreau_envelope(const Gauge& j, const Vec& x, double gamma,
                       const ProxOptions& prox = {});

/// ∇ of the smoothed potential V^γ(x) = (1/n)F(Xx,y) + λ·env_J^γ(x):
/// (1/n) Xᵀ∇F(Xx, y) + λ (x − prox(J, x, γ)) / γ.
Vec smoothed_potential_grad(const Mat& x_design, const Vec& y, const Gauge& j, double lambda,
                            double gamma, const Loss& loss, const Vec& x,
                            const ProxOptions& prox = {});

/// EWA estimate by the unadjusted Langevin chain on the smoothed potential:
/// x⁺ = x − (h/β) ∇V^γ(x) + √(2h) ξ, ξ standard normal. The chain starts at
/// `init` (typically the penalized minimizer; zero if not given), discards
/// burn_in steps and averages the rest. Throws ConvergenceError if the norm
/// overflow guard trips.
LmcResult solve_ewa(const Mat& x_design, const Vec& y, const Gauge& j, double lambda,
                    double beta, const Loss& loss, const LmcConfig& cfg = {},
                    const Vec* init = nullptr);

}  // namespace gpen
