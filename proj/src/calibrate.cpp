#include "gpen/calibrate.hpp"

#include <algorithm>
#include <cmath>

#include "gpen/loss.hpp"

namespace gpen {

namespace {

void check_common(double sigma, Index n, double tau) {
  if (sigma < 0) throw std::invalid_argument("lambda rule: sigma must be nonnegative");
  if (n <= 0) throw std::invalid_argument("lambda rule: n must be positive");
  if (!(tau > 1)) throw std::invalid_argument("lambda rule: tau must exceed 1");
}

void check_delta_gt1(double delta) {
  if (!(delta > 1)) throw std::invalid_argument("lambda rule: delta must exceed 1");
}

}  // namespace

double lambda_lasso(double sigma, Index n, Index p, double tau, double delta) {
  check_common(sigma, n, tau);
  check_delta_gt1(delta);
  return tau * sigma * std::sqrt(2.0 * delta * std::log(2.0 * p) / n);
}

double lambda_group(double sigma, Index n, Index k, Index l, double tau, double delta) {
  check_common(sigma, n, tau);
  check_delta_gt1(delta);
  if (k <= 0 || l <= 0) throw std::invalid_argument("lambda_group: K and L must be positive");
  return tau * sigma * (std::sqrt(static_cast<double>(k)) + std::sqrt(2.0 * delta * std::log(l))) /
         std::sqrt(static_cast<double>(n));
}

double lambda_linf(double sigma, Index n, Index p, double tau, double delta) {
  check_common(sigma, n, tau);
  check_delta_gt1(delta);
  return tau * sigma * std::sqrt(2.0 * delta * std::log(2.0)) *
         std::sqrt(static_cast<double>(p) / n);
}

double lambda_nuclear(double sigma, Index n, Index p1, Index p2, double tau, double delta) {
  check_common(sigma, n, tau);
  if (!(delta > 0)) throw std::invalid_argument("lambda_nuclear: delta must be positive");
  return (1.0 + delta) * tau * sigma * std::sqrt(2.0 * std::log(static_cast<double>(p1 + p2)) / n);
}

double lambda_bernstein_polytope(double sigma, double kappa, Index n, Index num_vertices,
                                 double tau, double delta) {
  check_common(sigma, n, tau);
  check_delta_gt1(delta);
  if (kappa < 0) throw std::invalid_argument("lambda_bernstein_polytope: kappa must be >= 0");
  if (num_vertices < 2) throw std::invalid_argument("lambda_bernstein_polytope: need >= 2 vertices");
  double logv = std::log(static_cast<double>(num_vertices));
  double base = tau * sigma * std::sqrt(2.0 * delta * logv / n);
  double kterm = sigma > 0 ? std::sqrt(2.0) * (kappa / sigma) * std::sqrt(delta * logv / n) : 0.0;
  return base * (1.0 + kterm);
}

WidthLambda lambda_subgaussian_width(double sigma, double width, Index n, double tau,
                                     double delta, double c1, double c2) {
  check_common(sigma, n, tau);
  if (!(delta > 0 && delta < std::min(c2, 1.0)))
    throw std::invalid_argument("lambda_subgaussian_width: need 0 < delta < min(c2, 1)");
  WidthLambda out;
  out.lambda = tau * sigma * c1 * std::sqrt(2.0 * std::log(c2 / delta)) * width / n;
  out.uncertified_constants = true;
  return out;
}

double lambda_empirical(const Mat& x, const Gauge& j,
                        const std::function<Vec(CounterRng&)>& noise_sampler, double tau,
                        double coverage, int trials, std::uint64_t seed) {
  check_dim(x.cols(), j.dim(), "lambda_empirical");
  if (!(tau > 1)) throw std::invalid_argument("lambda_empirical: tau must exceed 1");
  if (!(coverage > 0 && coverage <= 1))
    throw std::invalid_argument("lambda_empirical: coverage must be in (0, 1]");
  if (trials < 1) throw std::invalid_argument("lambda_empirical: trials must be positive");
  const auto n = static_cast<double>(x.rows());
  std::vector<double> vals(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t) + 0xe11a);
    Vec xi = noise_sampler(rng);
    vals[static_cast<std::size_t>(t)] = tau * j.polar(x.transpose() * xi) / n;
  }
  std::sort(vals.begin(), vals.end());
  auto idx = static_cast<std::size_t>(std::ceil(coverage * trials)) - 1;
  idx = std::min(idx, vals.size() - 1);
  return vals[idx];
}

double probability_floor_lasso(Index p, double delta) {
  return 1.0 - 2.0 * std::pow(2.0 * p, 1.0 - delta);
}

double probability_floor_group(Index l, double delta) {
  return 1.0 - std::pow(static_cast<double>(l), 1.0 - delta);
}

double probability_floor_linf(Index p, double delta) {
  return 1.0 - std::pow(2.0, 1.0 - static_cast<double>(p) * (delta - 1.0));
}

double probability_floor_nuclear(Index p1, Index p2, double delta) {
  return 1.0 - std::pow(static_cast<double>(p1 + p2), -delta * delta);
}

double probability_floor_polytope(Index num_vertices, double delta) {
  return 1.0 - 2.0 * std::pow(static_cast<double>(num_vertices), 1.0 - delta);
}

RemainderTerms oracle_remainder(double lambda, double tau, const Decomposition& dec,
                                double upsilon, double nu, Index) {
  if (!(upsilon > 0)) throw std::invalid_argument("oracle_remainder: upsilon must be positive");
  if (!(nu > 0)) throw std::invalid_argument("oracle_remainder: nu must be positive");
  double a = (tau * dec.jpolar_e + 1.0) * dec.opnorm_2_to_j;
  double core = lambda * lambda * a * a / (tau * tau * upsilon * upsilon);
  RemainderTerms out;
  out.general = core / (2.0 * nu);
  out.corollary = core;
  return out;
}

double oracle_remainder_power(double lambda, double tau, const Decomposition& dec,
                              double upsilon, double q, Index n) {
  if (!(upsilon > 0))
    throw std::invalid_argument("oracle_remainder_power: upsilon must be positive");
  double a = (tau * dec.jpolar_e + 1.0) * dec.opnorm_2_to_j;
  double arg = lambda * std::sqrt(static_cast<double>(n)) * a / (tau * upsilon);
  return phi_conjugate(q, arg) / static_cast<double>(n);
}

OracleBoundReport assemble_report(double estimator_risk, double candidate_risk, double remainder,
                                  double beta, Index dim, bool is_ewa, double upsilon,
                                  CompatMode upsilon_mode, double lambda,
                                  double probability_floor) {
  OracleBoundReport rep;
  rep.candidate_risk = candidate_risk;
  rep.remainder = remainder;
  rep.ewa_term = is_ewa ? static_cast<double>(dim) * beta : 0.0;
  rep.rhs = candidate_risk + remainder + rep.ewa_term;
  rep.lhs = estimator_risk;
  rep.holds = rep.lhs <= rep.rhs + 1e-12;
  rep.upsilon = upsilon;
  rep.upsilon_mode = upsilon_mode;
  rep.lambda = lambda;
  rep.probability_floor = probability_floor;
  return rep;
}

}  // namespace gpen
