#include "gpen/compat.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "gpen/rng.hpp"

namespace gpen {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDenFloor = 1e-12;
}  // namespace

double compatibility_ratio(const CompatQuery& q, const Vec& omega) {
  Vec wt = q.decomp.project(omega);
  Vec ws = omega - wt;
  double den = q.j.eval(wt) - q.j.eval(ws) / q.c;
  if (den < kDenFloor) return kInf;  // boundary blow-up is numerical, not structural
  double num = q.decomp.opnorm_2_to_j * (q.x * omega).norm();
  return num / (std::sqrt(static_cast<double>(q.x.rows())) * den);
}

namespace {

CompatResult brute_force(const CompatQuery& q) {
  const Index p = q.x.cols();
  const int g = std::max(3, q.search.grid_points);
  CompatResult res;
  res.mode = CompatMode::BruteForce;
  long total = 1;
  for (Index i = 0; i < p; ++i) total *= g;

  double best = kInf;
#pragma omp parallel
  {
    double local_best = kInf;
#pragma omp for schedule(static)
    for (long idx = 0; idx < total; ++idx) {
      long rem = idx;
      Vec omega(p);
      bool all_zero = true;
      for (Index i = 0; i < p; ++i) {
        int digit = static_cast<int>(rem % g);
        rem /= g;
        omega[i] = -1.0 + 2.0 * digit / (g - 1);
        if (omega[i] != 0.0) all_zero = false;
      }
      if (all_zero) continue;
      double r = compatibility_ratio(q, omega);  // ratio is 0-homogeneous
      local_best = std::min(local_best, r);
    }
#pragma omp critical
    best = std::min(best, local_best);
  }
  res.evaluations = total;
  res.estimate = best;
  return res;
}

struct RestartOutcome {
  double best = kInf;
  long evals = 0;
};

RestartOutcome one_restart(const CompatQuery& q, int r) {
  const Index p = q.x.cols();
  const Index tdim = q.decomp.subspace_dim();
  CounterRng rng(q.search.seed, static_cast<std::uint64_t>(r) + 1000);
  RestartOutcome out;

  auto ratio = [&](const Vec& w) {
    ++out.evals;
    return compatibility_ratio(q, w);
  };

  Vec omega;
  double f = kInf;
  for (int tries = 0; tries < 32 && !std::isfinite(f); ++tries) {
    omega = (r % 2 == 0 && tries < 16) ? rng.unit_vec(p)
                                       : Vec(q.decomp.t_basis * rng.unit_vec(tdim));
    f = ratio(omega);
  }
  if (!std::isfinite(f)) return out;

  const double h = 1e-6;
  double alpha = 0.3;
  for (int it = 0; it < q.search.descent_iters && alpha > 1e-10; ++it) {
    Vec grad = Vec::Zero(p);
    for (Index i = 0; i < p; ++i) {
      Vec up = omega, dn = omega;
      up[i] += h;
      dn[i] -= h;
      double fu = ratio(up), fd = ratio(dn);
      if (std::isfinite(fu) && std::isfinite(fd)) grad[i] = (fu - fd) / (2 * h);
    }
    double gn = grad.norm();
    if (gn < 1e-16) break;
    Vec trial = omega - alpha * grad / gn;
    double tn = trial.norm();
    if (tn < 1e-12) break;
    trial /= tn;
    double ft = ratio(trial);
    if (ft < f) {
      omega = trial;
      f = ft;
      alpha *= 1.3;
    } else {
      alpha *= 0.5;
    }
  }
  out.best = f;
  return out;
}

CompatResult local_search(const CompatQuery& q) {
  CompatResult res;
  res.mode = CompatMode::LocalSearch;
  const Index tdim = q.decomp.subspace_dim();
  const int restarts = std::max(1, q.search.restarts);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < restarts; ++r) outcomes[static_cast<std::size_t>(r)] = one_restart(q, r);

  double best = kInf;
  for (const auto& o : outcomes) {
    best = std::min(best, o.best);
    res.evaluations += o.evals;
  }
  // Deterministic seeds: equal-weight and single-column directions in T.
  for (Index k = 0; k < tdim; ++k) {
    best = std::min(best, compatibility_ratio(q, q.decomp.t_basis.col(k)));
    ++res.evaluations;
  }
  Vec ones_dir = q.decomp.t_basis * Vec::Ones(tdim);
  best = std::min(best, compatibility_ratio(q, ones_dir));
  if (q.decomp.e.norm() > 0) best = std::min(best, compatibility_ratio(q, q.decomp.e));
  res.evaluations += 2;
  res.estimate = best;
  return res;
}

}  // namespace

CompatResult compatibility_factor(const CompatQuery& q) {
  check_dim(q.x.cols(), q.j.dim(), "compatibility_factor");
  if (!(q.c > 0)) throw std::invalid_argument("compatibility_factor: c must be positive");
  if (q.decomp.subspace_dim() == 0)
    throw std::invalid_argument("compatibility_factor: degenerate model subspace T = {0}");

  CompatMode mode =
      q.search.mode.value_or(q.x.cols() <= 4 ? CompatMode::BruteForce : CompatMode::LocalSearch);
  if (mode == CompatMode::BruteForce && q.x.cols() > 4)
    throw std::invalid_argument("compatibility_factor: brute-force mode requires p <= 4");

  CompatResult res = mode == CompatMode::BruteForce ? brute_force(q) : local_search(q);
  if (!std::isfinite(res.estimate))
    throw std::runtime_error("compatibility_factor: no feasible point found");
  return res;
}

}  // namespace gpen
