#pragma once

#include "gpen/types.hpp"

namespace gpen {

enum class LossKind { Quadratic, PowerNorm };

/// Data-fidelity term F(u, y). Quadratic is 1/2 ‖y − u‖²; PowerNorm(q) is
/// ‖u − y‖ᵠ/q with q >= 2 (uniformly convex with a power modulus).
class Loss {
 public:
  static Loss quadratic() { return Loss(LossKind::Quadratic, 2.0); }
  static Loss power(double q) {
    if (q < 2.0) throw std::invalid_argument("loss: power exponent must be >= 2");
    return Loss(LossKind::PowerNorm, q);
  }

  LossKind kind() const { return kind_; }
  double exponent() const { return q_; }
  double conjugate_exponent() const { return q_ / (q_ - 1.0); }

  double eval(const Vec& u, const Vec& y) const;
  Vec grad(const Vec& u, const Vec& y) const;
  /// D_F(v, u) = F(v,y) − F(u,y) − <∇F(u,y), v−u>, nonnegative.
  double bregman(const Vec& v, const Vec& u, const Vec& y) const;
  /// Lipschitz constant of ∇F(·,y) near u (exact 1 for Quadratic).
  double grad_lipschitz(const Vec& u, const Vec& y) const;

 private:
  Loss(LossKind k, double q) : kind_(k), q_(q) {}
  LossKind kind_;
  double q_;
};

/// Monotone conjugate of t ↦ tᵠ/q at t >= 0: t^{q*}/q*, 1/q + 1/q* = 1.
double phi_conjugate(double q, double t);

struct RiskPair {
  double bregman;  // (1/n) D_F(Xx; Xx0)
  double doubled;  // (1/n) ‖X(x − x0)‖²
};

/// Prediction risk between x and x0 under design X. The Bregman form is
/// taken at the truth predictions; pass y to evaluate it with observed data
/// instead (identical for the quadratic loss).
RiskPair risk(const Mat& x_design, const Vec& x, const Vec& x0, const Loss& loss,
              const Vec* y = nullptr);

}  // namespace gpen
