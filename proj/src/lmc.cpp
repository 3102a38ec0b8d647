#include "gpen/lmc.hpp"

#include <cmath>

#include "gpen/fb.hpp"
#include "gpen/rng.hpp"

namespace gpen {

double moreau_envelope(const Gauge& j, const Vec& x, double gamma, const ProxOptions& prox) {
  if (!(gamma > 0)) throw std::invalid_argument("moreau_envelope: gamma must be positive");
  Vec u = j.prox(x, gamma, prox);
  return (u - x).squaredNorm() / (2.0 * gamma) + j.eval(u);
}

Vec smoothed_potential_grad(const Mat& x_design, const Vec& y, const Gauge& j, double lambda,
                            double gamma, const Loss& loss, const Vec& x,
                            const ProxOptions& prox) {
  const auto n = static_cast<double>(x_design.rows());
  Vec grad_f = x_design.transpose() * loss.grad(x_design * x, y) / n;
  return grad_f + lambda * (x - j.prox(x, gamma, prox)) / gamma;
}

LmcResult solve_ewa(const Mat& x_design, const Vec& y, const Gauge& j, double lambda,
                    double beta, const Loss& loss, const LmcConfig& cfg, const Vec* init) {
  check_dim(x_design.cols(), j.dim(), "solve_ewa");
  check_dim(y.size(), x_design.rows(), "solve_ewa");
  if (!(lambda > 0))
    throw std::invalid_argument("solve_ewa: lambda must be positive (the gauge must be active)");
  if (!(beta > 0)) throw std::invalid_argument("solve_ewa: beta must be positive");
  if (cfg.samples <= 0) throw std::invalid_argument("solve_ewa: samples must be positive");

  const Index p = j.dim();
  const auto n = static_cast<double>(x_design.rows());
  Vec x = init ? *init : Vec::Zero(p);

  // Smoothing parameter: keep the envelope bias small relative to the
  // temperature; the λ/γ term then dominates the gradient Lipschitz constant.
  double gamma = cfg.gamma;
  if (gamma <= 0) gamma = std::min(0.1 * beta / lambda, 0.1);

  double lip_f = spectral_norm_sq(x_design) / n * loss.grad_lipschitz(x_design * x, y);
  double lip = lip_f + lambda / gamma;
  double h = cfg.step;
  if (h <= 0) h = cfg.stability_margin * beta / lip;
  if (h * lip / beta >= 1.0)
    throw std::invalid_argument("solve_ewa: step violates h·Lip(∇V^γ)/β < 1");

  LmcResult res;
  res.step_used = h;
  res.gamma_used = gamma;

  CounterRng rng(cfg.seed, 0x11c);
  const double noise_scale = std::sqrt(2.0 * h);
  const int total = cfg.burn_in + cfg.samples;
  Vec sum = Vec::Zero(p);
  double potential_sum = 0;

  // Batch means for the Monte-Carlo standard error of the chain average.
  const int n_batches = std::min(50, std::max(2, cfg.samples / 20));
  const int batch_len = cfg.samples / n_batches;
  Mat batch_sums = Mat::Zero(p, n_batches);

  ProxOptions prox;
  for (int k = 0; k < total; ++k) {
    Vec grad = smoothed_potential_grad(x_design, y, j, lambda, gamma, loss, x, prox);
    for (Index i = 0; i < p; ++i) x[i] += -h / beta * grad[i] + noise_scale * rng.normal();
    if (!x.allFinite() || x.norm() > cfg.divergence_norm)
      throw ConvergenceError("solve_ewa: chain diverged at step " + std::to_string(k) +
                                 " (‖x‖ overflow)",
                             x.allFinite() ? x.norm() : std::numeric_limits<double>::infinity());
    if (k >= cfg.burn_in) {
      sum += x;
      potential_sum += objective_value(x_design, y, j, lambda, loss, x);
      int kept = k - cfg.burn_in;
      int b = std::min(kept / std::max(1, batch_len), n_batches - 1);
      batch_sums.col(b) += x;
    }
    res.steps = k + 1;
  }

  res.mean = sum / static_cast<double>(cfg.samples);
  res.mean_potential = potential_sum / static_cast<double>(cfg.samples);
  res.final_state = x;

  res.mc_se = Vec::Zero(p);
  if (n_batches >= 2 && batch_len >= 1) {
    Mat batch_means(p, n_batches);
    for (int b = 0; b < n_batches; ++b) {
      int len = (b == n_batches - 1) ? cfg.samples - batch_len * (n_batches - 1) : batch_len;
      batch_means.col(b) = batch_sums.col(b) / static_cast<double>(len);
    }
    for (Index i = 0; i < p; ++i) {
      double m = batch_means.row(i).mean();
      double var = (batch_means.row(i).array() - m).square().sum() / (n_batches - 1);
      res.mc_se[i] = std::sqrt(var / n_batches);
    }
  }
  return res;
}

}  // namespace gpen
