#include "gpen/fb.hpp"

#include <cmath>

#include "gpen/rng.hpp"

namespace gpen {

double spectral_norm_sq(const Mat& x, int iters, std::uint64_t seed) {
  if (x.size() == 0) return 0.0;
  CounterRng rng(seed, 0xb0b);
  Vec v = rng.unit_vec(x.cols());
  double lam = 0;
  for (int k = 0; k < iters; ++k) {
    Vec w = x.transpose() * (x * v);
    double n = w.norm();
    if (n < 1e-300) return 0.0;
    double lam_next = v.dot(w);
    v = w / n;
    if (k > 4 && std::abs(lam_next - lam) <= 1e-14 * std::max(1.0, lam_next)) {
      lam = lam_next;
      break;
    }
    lam = lam_next;
  }
  return lam;
}

double objective_value(const Mat& x_design, const Vec& y, const Gauge& j, double lambda,
                       const Loss& loss, const Vec& x) {
  const auto n = static_cast<double>(x_design.rows());
  return loss.eval(x_design * x, y) / n + lambda * j.eval(x);
}

FbResult solve_penalized(const Mat& x_design, const Vec& y, const Gauge& j, double lambda,
                         const Loss& loss, const FbConfig& cfg) {
  check_dim(x_design.cols(), j.dim(), "solve_penalized");
  check_dim(y.size(), x_design.rows(), "solve_penalized");
  if (!(lambda > 0)) throw std::invalid_argument("solve_penalized: lambda must be positive");
  const auto n = static_cast<double>(x_design.rows());

  FbResult res;
  res.x = Vec::Zero(j.dim());
  double step = cfg.step;
  if (step <= 0) {
    double lip = spectral_norm_sq(x_design) / n * loss.grad_lipschitz(x_design * res.x, y);
    step = lip > 0 ? 1.0 / lip : 1.0;
  }
  res.step_used = step;

  Vec warm;  // dual warm start for iterative proxes
  ProxOptions prox = cfg.prox;
  prox.warm_start = &warm;

  for (int it = 0; it < cfg.max_iters; ++it) {
    Vec grad = x_design.transpose() * loss.grad(x_design * res.x, y) / n;
    Vec x_next = j.prox(res.x - step * grad, step * lambda, prox);
    double r = (res.x - x_next).norm();
    res.x.swap(x_next);
    res.iterations = it + 1;
    res.residual = r;
    if (cfg.trace_every > 0 && it % cfg.trace_every == 0) res.residual_trace.push_back(r);
    if (r <= cfg.tol * std::max(1.0, res.x.norm())) {
      res.converged = true;
      break;
    }
  }
  res.objective = objective_value(x_design, y, j, lambda, loss, res.x);
  return res;
}

double optimality_residual(const Mat& x_design, const Vec& y, const Gauge& j, double lambda,
                           const Loss& loss, const Vec& theta, double step,
                           const ProxOptions& prox) {
  if (!(step > 0)) throw std::invalid_argument("optimality_residual: step must be positive");
  const auto n = static_cast<double>(x_design.rows());
  Vec grad = x_design.transpose() * loss.grad(x_design * theta, y) / n;
  return (theta - j.prox(theta - step * grad, step * lambda, prox)).norm();
}

}  // namespace gpen
