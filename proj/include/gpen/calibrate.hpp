#pragma once

#include <functional>

#include "gpen/compat.hpp"
#include "gpen/gauge.hpp"
#include "gpen/rng.hpp"
#include "gpen/types.hpp"

namespace gpen {

/// Closed-form λ_n rules. Each is nonnegative, linear in σ and τ, and decays
/// as n^{-1/2}. δ ranges are rule-specific and validated.

/// τσ√(2δ·log(2p)/n), δ > 1.
double lambda_lasso(double sigma, Index n, Index p, double tau, double delta);
/// τσ(√K + √(2δ·log L))/√n for L equal blocks of size K (Gaussian noise), δ > 1.
double lambda_group(double sigma, Index n, Index k, Index l, double tau, double delta);
/// τσ√(2δ·log 2)·√(p/n), δ > 1.
double lambda_linf(double sigma, Index n, Index p, double tau, double delta);
/// (1+δ)τσ√(2·log(p1+p2)/n) (Gaussian noise), δ > 0.
double lambda_nuclear(double sigma, Index n, Index p1, Index p2, double tau, double delta);
/// τσ√(2δ log|V|/n)·(1 + √2·(κ/σ)√(δ log|V|/n)) for a vertex set V under the
/// Bernstein moment condition, δ > 1.
double lambda_bernstein_polytope(double sigma, double kappa, Index n, Index num_vertices,
                                 double tau, double delta);

/// Generic-chaining sub-Gaussian rule τσc₁√(2 log(c₂/δ))·w/n. The absolute
/// constants c₁, c₂ are not instantiated by the theory; with the default 1s
/// the value is flagged uncertified and lambda_empirical is the recommended
/// route.
struct WidthLambda {
  double lambda = 0;
  bool uncertified_constants = true;
};
WidthLambda lambda_subgaussian_width(double sigma, double width, Index n, double tau,
                                     double delta, double c1 = 1.0, double c2 = 1.0);

/// Empirical `coverage`-quantile of τ·J°(Xᵀξ)/n over independent noise draws.
double lambda_empirical(const Mat& x, const Gauge& j,
                        const std::function<Vec(CounterRng&)>& noise_sampler, double tau,
                        double coverage, int trials, std::uint64_t seed = 0);

/// Probability floors of the matching corollaries.
double probability_floor_lasso(Index p, double delta);          // 1 − 2(2p)^{1−δ}
double probability_floor_group(Index l, double delta);          // 1 − L^{1−δ}
double probability_floor_linf(Index p, double delta);           // 1 − 2^{1−p(δ−1)}
double probability_floor_nuclear(Index p1, Index p2, double delta);  // 1 − (p1+p2)^{−δ²}
double probability_floor_polytope(Index num_vertices, double delta);  // 1 − 2|V|^{1−δ}

/// c argument of the compatibility factor in the oracle bounds.
inline double compat_c(double tau, double jpolar_e) {
  return (tau * jpolar_e + 1.0) / (tau - 1.0);
}

struct RemainderTerms {
  /// Quadratic-modulus remainder λ²(τJ°(e)+1)²‖P_T‖² / (2τ²νΥ²).
  double general = 0;
  /// Doubled-risk corollary form (no 1/2, ν = 1): λ²(τJ°(e)+1)²‖P_T‖² / (τ²Υ²).
  double corollary = 0;
};
RemainderTerms oracle_remainder(double lambda, double tau, const Decomposition& dec,
                                double upsilon, double nu, Index n);

/// Power-modulus variant (1/n)·φ⁺(λ√n(τJ°(e)+1)‖P_T‖/(τΥ)) with φ(t) = tᵠ/q.
double oracle_remainder_power(double lambda, double tau, const Decomposition& dec,
                              double upsilon, double q, Index n);

struct OracleBoundReport {
  double candidate_risk = 0;
  double remainder = 0;
  double ewa_term = 0;  // p·β for EWA, 0 for penalized
  double rhs = 0;
  double lhs = 0;
  bool holds = false;
  double upsilon = 0;
  CompatMode upsilon_mode = CompatMode::LocalSearch;
  double lambda = 0;
  double probability_floor = 0;
};

OracleBoundReport assemble_report(double estimator_risk, double candidate_risk, double remainder,
                                  double beta, Index dim, bool is_ewa, double upsilon,
                                  CompatMode upsilon_mode, double lambda,
                                  double probability_floor);

}  // namespace gpen
