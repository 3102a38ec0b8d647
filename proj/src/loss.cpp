#include "gpen/loss.hpp"

#include <cmath>

namespace gpen {

double Loss::eval(const Vec& u, const Vec& y) const {
  check_dim(u.size(), y.size(), "loss eval");
  double r = (u - y).norm();
  if (kind_ == LossKind::Quadratic) return 0.5 * r * r;
  return std::pow(r, q_) / q_;
}

Vec Loss::grad(const Vec& u, const Vec& y) const {
  check_dim(u.size(), y.size(), "loss grad");
  if (kind_ == LossKind::Quadratic) return u - y;
  double r = (u - y).norm();
  if (r == 0) return Vec::Zero(u.size());
  return std::pow(r, q_ - 2.0) * (u - y);
}

double Loss::bregman(const Vec& v, const Vec& u, const Vec& y) const {
  check_dim(v.size(), u.size(), "loss bregman");
  return eval(v, y) - eval(u, y) - grad(u, y).dot(v - u);
}

double Loss::grad_lipschitz(const Vec& u, const Vec& y) const {
  if (kind_ == LossKind::Quadratic) return 1.0;
  double r = (u - y).norm();
  return (q_ - 1.0) * std::pow(std::max(r, 1e-8), q_ - 2.0);
}

double phi_conjugate(double q, double t) {
  if (q < 2.0) throw std::invalid_argument("phi_conjugate: q must be >= 2");
  if (t < 0) throw std::invalid_argument("phi_conjugate: t must be nonnegative");
  double qs = q / (q - 1.0);
  return std::pow(t, qs) / qs;
}

RiskPair risk(const Mat& x_design, const Vec& x, const Vec& x0, const Loss& loss,
              const Vec* y) {
  check_dim(x.size(), x_design.cols(), "risk");
  check_dim(x0.size(), x_design.cols(), "risk");
  const auto n = static_cast<double>(x_design.rows());
  Vec px = x_design * x;
  Vec px0 = x_design * x0;
  RiskPair out;
  out.bregman = loss.bregman(px, px0, y ? *y : px0) / n;
  out.doubled = (px - px0).squaredNorm() / n;
  return out;
}

}  // namespace gpen
