#include "gpen/gauge.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "gpen/rng.hpp"

namespace gpen {

namespace {

double sign_of(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

void validate_blocks(const Blocks& blocks, Index q) {
  std::vector<char> seen(static_cast<std::size_t>(q), 0);
  for (const auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("gauge: empty block");
    for (Index i : b) {
      if (i < 0 || i >= q) throw std::invalid_argument("gauge: block index out of range");
      if (seen[static_cast<std::size_t>(i)]) throw std::invalid_argument("gauge: overlapping blocks");
      seen[static_cast<std::size_t>(i)] = 1;
    }
  }
  for (char s : seen)
    if (!s) throw std::invalid_argument("gauge: blocks do not cover all coordinates");
}

double block_norm(const Vec& v, const std::vector<Index>& b) {
  double s = 0;
  for (Index i : b) s += v[i] * v[i];
  return std::sqrt(s);
}

/// Maximize f over the unit sphere in R^dim: random probes, then local ascent
/// with finite-difference subgradients from the best candidates.
double sphere_maximize(Index dim, const std::function<double(const Vec&)>& f, int probes,
                       std::uint64_t seed, const std::vector<Vec>& extra_starts = {},
                       int ascent_iters = 200) {
  if (dim == 0) return 0.0;
  CounterRng rng(seed, 0x5fe7);
  double best = -std::numeric_limits<double>::infinity();
  constexpr int kTop = 3;
  std::vector<std::pair<double, Vec>> top;

  auto consider = [&](const Vec& u) {
    double v = f(u);
    best = std::max(best, v);
    if (static_cast<int>(top.size()) < kTop) {
      top.emplace_back(v, u);
      std::sort(top.begin(), top.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
    } else if (v > top.back().first) {
      top.back() = {v, u};
      std::sort(top.begin(), top.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
    }
  };

  for (Index i = 0; i < dim; ++i) {
    Vec u = Vec::Zero(dim);
    u[i] = 1.0;
    consider(u);
    u[i] = -1.0;
    consider(u);
  }
  for (const Vec& s : extra_starts) {
    double n = s.norm();
    if (n > 1e-300) consider(s / n);
  }
  for (int k = 0; k < probes; ++k) consider(rng.unit_vec(dim));

  const double h = 1e-7;
  for (auto& [fv, u0] : top) {
    Vec u = u0;
    double fu = fv;
    double alpha = 0.2;
    for (int it = 0; it < ascent_iters && alpha > 1e-11; ++it) {
      Vec g(dim);
      for (Index i = 0; i < dim; ++i) {
        Vec up = u, dn = u;
        up[i] += h;
        dn[i] -= h;
        g[i] = (f(up / up.norm()) - f(dn / dn.norm())) / (2 * h);
      }
      Vec tang = g - g.dot(u) * u;
      double tn = tang.norm();
      if (tn < 1e-14) break;
      Vec trial = u + alpha * tang / tn;
      trial /= trial.norm();
      double ft = f(trial);
      if (ft > fu + 1e-15) {
        u = trial;
        fu = ft;
        alpha *= 1.3;
      } else {
        alpha *= 0.5;
      }
    }
    best = std::max(best, fu);
  }
  return best;
}

}  // namespace

struct Gauge::Impl {
  GaugeKind kind;
  Index p = 0;  // ambient dimension
  Blocks blocks;
  Mat d;       // p x q
  Mat dplus;   // q x p, pseudo-inverse Dᵀ(DDᵀ)⁻¹, valid when frame_ok
  double d_opnorm_sq = 0;
  FrameConstants frame;
  bool frame_ok = false;
  Index p1 = 0, p2 = 0;
  std::vector<Gauge> children;

  void setup_d() {
    Eigen::SelfAdjointEigenSolver<Mat> es(d * d.transpose());
    frame.upper = es.eigenvalues().maxCoeff();
    frame.lower = es.eigenvalues().minCoeff();
    d_opnorm_sq = frame.upper;
    frame_ok = frame.lower > 1e-10 * std::max(1.0, frame.upper);
    if (frame_ok)
      dplus = d.transpose() * (d * d.transpose()).ldlt().solve(Mat::Identity(p, p));
  }
};

Gauge Gauge::lasso(Index p) {
  if (p <= 0) throw std::invalid_argument("lasso: p must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = GaugeKind::Lasso;
  impl->p = p;
  return Gauge(std::move(impl));
}

Gauge Gauge::group_lasso(Index p, Blocks blocks) {
  if (p <= 0) throw std::invalid_argument("group_lasso: p must be positive");
  validate_blocks(blocks, p);
  auto impl = std::make_shared<Impl>();
  impl->kind = GaugeKind::GroupLasso;
  impl->p = p;
  impl->blocks = std::move(blocks);
  return Gauge(std::move(impl));
}

Gauge Gauge::analysis_group_lasso(Mat d, Blocks blocks) {
  if (d.rows() <= 0 || d.cols() <= 0)
    throw std::invalid_argument("analysis_group_lasso: empty D");
  validate_blocks(blocks, d.cols());
  auto impl = std::make_shared<Impl>();
  impl->kind = GaugeKind::AnalysisGroupLasso;
  impl->p = d.rows();
  impl->d = std::move(d);
  impl->blocks = blocks;
  impl->setup_d();
  if (!impl->frame_ok)
    throw FrameError("analysis_group_lasso: D fails the frame condition (DDᵀ singular)");
  impl->children.push_back(Gauge::group_lasso(impl->d.cols(), std::move(blocks)));
  return Gauge(std::move(impl));
}

Gauge Gauge::linf(Index p) {
  if (p <= 0) throw std::invalid_argument("linf: p must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = GaugeKind::LInf;
  impl->p = p;
  return Gauge(std::move(impl));
}

Gauge Gauge::nuclear(Index p1, Index p2) {
  if (p1 <= 0 || p2 <= 0) throw std::invalid_argument("nuclear: dimensions must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = GaugeKind::Nuclear;
  impl->p = p1 * p2;
  impl->p1 = p1;
  impl->p2 = p2;
  return Gauge(std::move(impl));
}

Gauge Gauge::sum(Gauge a, Gauge b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("sum: ambient dimensions differ");
  auto impl = std::make_shared<Impl>();
  impl->kind = GaugeKind::Sum;
  impl->p = a.dim();
  impl->children.push_back(std::move(a));
  impl->children.push_back(std::move(b));
  return Gauge(std::move(impl));
}

Gauge Gauge::precompose(Gauge base, Mat d) {
  if (d.cols() != base.dim())
    throw std::invalid_argument("precompose: D columns must match base dimension");
  auto impl = std::make_shared<Impl>();
  impl->kind = GaugeKind::Precomposed;
  impl->p = d.rows();
  impl->d = std::move(d);
  impl->setup_d();
  impl->children.push_back(std::move(base));
  return Gauge(std::move(impl));
}

GaugeKind Gauge::kind() const { return impl_->kind; }
Index Gauge::dim() const { return impl_->p; }
const Blocks& Gauge::blocks() const { return impl_->blocks; }
const Mat& Gauge::d_matrix() const { return impl_->d; }
Index Gauge::p1() const { return impl_->p1; }
Index Gauge::p2() const { return impl_->p2; }
const Gauge& Gauge::left() const { return impl_->children.at(0); }
const Gauge& Gauge::right() const { return impl_->children.at(1); }
const Gauge& Gauge::base() const { return impl_->children.at(0); }

FrameConstants Gauge::frame_constants() const {
  if (impl_->kind != GaugeKind::AnalysisGroupLasso && impl_->kind != GaugeKind::Precomposed)
    throw std::invalid_argument("frame_constants: gauge has no D operator");
  return impl_->frame;
}

std::string Gauge::name() const {
  switch (impl_->kind) {
    case GaugeKind::Lasso: return "lasso";
    case GaugeKind::GroupLasso: return "group-lasso";
    case GaugeKind::AnalysisGroupLasso: return "analysis-group-lasso";
    case GaugeKind::LInf: return "linf";
    case GaugeKind::Nuclear: return "nuclear";
    case GaugeKind::Sum: return "sum(" + left().name() + "+" + right().name() + ")";
    case GaugeKind::Precomposed: return "precomposed(" + base().name() + ")";
  }
  return "?";
}

double Gauge::eval(const Vec& x) const {
  check_dim(x.size(), impl_->p, "gauge eval");
  switch (impl_->kind) {
    case GaugeKind::Lasso:
      return x.lpNorm<1>();
    case GaugeKind::GroupLasso: {
      double s = 0;
      for (const auto& b : impl_->blocks) s += block_norm(x, b);
      return s;
    }
    case GaugeKind::AnalysisGroupLasso:
    case GaugeKind::Precomposed:
      return base().eval(impl_->d.transpose() * x);
    case GaugeKind::LInf:
      return x.lpNorm<Eigen::Infinity>();
    case GaugeKind::Nuclear: {
      Eigen::Map<const Mat> m(x.data(), impl_->p1, impl_->p2);
      Eigen::JacobiSVD<Mat> svd(m);
      return svd.singularValues().cwiseMax(0.0).sum();
    }
    case GaugeKind::Sum:
      return left().eval(x) + right().eval(x);
  }
  return 0;
}

double Gauge::polar(const Vec& w) const {
  check_dim(w.size(), impl_->p, "gauge polar");
  switch (impl_->kind) {
    case GaugeKind::Lasso:
      return w.lpNorm<Eigen::Infinity>();
    case GaugeKind::GroupLasso: {
      double m = 0;
      for (const auto& b : impl_->blocks) m = std::max(m, block_norm(w, b));
      return m;
    }
    case GaugeKind::AnalysisGroupLasso:
    case GaugeKind::Precomposed: {
      if (!impl_->frame_ok)
        throw FrameError("polar: D fails the frame condition (DDᵀ singular)");
      return base().polar(impl_->dplus * w);
    }
    case GaugeKind::LInf:
      return w.lpNorm<1>();
    case GaugeKind::Nuclear: {
      Eigen::Map<const Mat> m(w.data(), impl_->p1, impl_->p2);
      Eigen::JacobiSVD<Mat> svd(m);
      return svd.singularValues().maxCoeff();
    }
    case GaugeKind::Sum: {
      // Support function of {x : J(x)+G(x) <= 1}; no closed form, maximize
      // <w,d>/H(d) over unit directions. Intended for tests at small p.
      if (w.norm() == 0) return 0.0;
      auto ratio = [&](const Vec& dvec) {
        double h = eval(dvec);
        if (h < 1e-300) return 0.0;
        return w.dot(dvec) / h;
      };
      return sphere_maximize(impl_->p, ratio, 4000, 0x90a1, {w});
    }
  }
  return 0;
}

Vec project_l1_ball(const Vec& x, double radius) {
  if (radius < 0) throw std::invalid_argument("project_l1_ball: negative radius");
  if (radius == 0) return Vec::Zero(x.size());
  if (x.lpNorm<1>() <= radius) return x;
  Vec a = x.cwiseAbs();
  std::vector<double> srt(a.data(), a.data() + a.size());
  std::sort(srt.begin(), srt.end(), std::greater<double>());
  double cum = 0, theta = 0;
  for (std::size_t j = 0; j < srt.size(); ++j) {
    cum += srt[j];
    double cand = (cum - radius) / static_cast<double>(j + 1);
    if (srt[j] - cand > 0)
      theta = cand;
    else
      break;
  }
  Vec out(x.size());
  for (Index i = 0; i < x.size(); ++i) out[i] = sign_of(x[i]) * std::max(a[i] - theta, 0.0);
  return out;
}

namespace {

/// prox of t·base(Dᵀ·) by forward-backward on the dual ball {base°(v) <= t}:
/// v⁺ = proj(v + μ Dᵀ(x − Dv)), μ = 1/‖D‖², primal u = x − Dv.
/// The ball projection comes from the Moreau identity proj = id − prox.
Vec prox_dual_fb(const Gauge& base, const Mat& d, double opnorm_sq, const Vec& x, double t,
                 const ProxOptions& opts) {
  const Index q = d.cols();
  if (opnorm_sq <= 0) return x;
  auto proj_polar_ball = [&](const Vec& z) -> Vec { return z - base.prox(z, t); };
  Vec v = Vec::Zero(q);
  if (opts.warm_start && opts.warm_start->size() == q) v = proj_polar_ball(*opts.warm_start);
  const double mu = 1.0 / opnorm_sq;
  double res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iters; ++it) {
    Vec grad = d.transpose() * (x - d * v);
    Vec v_next = proj_polar_ball(v + mu * grad);
    res = (v_next - v).norm();
    v.swap(v_next);
    if (res <= opts.tol) {
      if (opts.warm_start) *opts.warm_start = v;
      return x - d * v;
    }
  }
  throw ConvergenceError("prox: dual forward-backward exceeded max_inner_iters (residual " +
                             std::to_string(res) + ")",
                         res);
}

/// prox of t(J+G) by Dykstra-like alternating proxes.
Vec prox_dykstra(const Gauge& a, const Gauge& b, const Vec& x, double t,
                 const ProxOptions& opts) {
  Vec z = x, p = Vec::Zero(x.size()), q = Vec::Zero(x.size());
  const ProxOptions inner{opts.tol, opts.max_iters, nullptr};
  double res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iters; ++it) {
    Vec y = a.prox(z + p, t, inner);
    p = z + p - y;
    Vec z_next = b.prox(y + q, t, inner);
    q = y + q - z_next;
    res = (z_next - y).norm();
    z.swap(z_next);
    if (res <= opts.tol) return z;
  }
  throw ConvergenceError("prox: Dykstra scheme exceeded max_inner_iters (residual " +
                             std::to_string(res) + ")",
                         res);
}

}  // namespace

Vec Gauge::prox(const Vec& x, double t, const ProxOptions& opts) const {
  check_dim(x.size(), impl_->p, "gauge prox");
  if (!(t > 0)) throw std::invalid_argument("gauge prox: t must be positive");
  switch (impl_->kind) {
    case GaugeKind::Lasso: {
      Vec out(x.size());
      for (Index i = 0; i < x.size(); ++i)
        out[i] = sign_of(x[i]) * std::max(std::abs(x[i]) - t, 0.0);
      return out;
    }
    case GaugeKind::GroupLasso: {
      Vec out = x;
      for (const auto& b : impl_->blocks) {
        double n = block_norm(x, b);
        double scale = n > t ? 1.0 - t / n : 0.0;
        for (Index i : b) out[i] = x[i] * scale;
      }
      return out;
    }
    case GaugeKind::LInf:
      return x - project_l1_ball(x, t);
    case GaugeKind::Nuclear: {
      Eigen::Map<const Mat> m(x.data(), impl_->p1, impl_->p2);
      Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      Vec s = svd.singularValues();
      for (Index i = 0; i < s.size(); ++i) s[i] = std::max(s[i] - t, 0.0);
      Mat out = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
      return Eigen::Map<const Vec>(out.data(), impl_->p);
    }
    case GaugeKind::AnalysisGroupLasso:
    case GaugeKind::Precomposed:
      return prox_dual_fb(base(), impl_->d, impl_->d_opnorm_sq, x, t, opts);
    case GaugeKind::Sum:
      return prox_dykstra(left(), right(), x, t, opts);
  }
  return x;
}

std::vector<Index> saturation_support(const Vec& x) {
  double m = x.lpNorm<Eigen::Infinity>();
  std::vector<Index> sat;
  if (m == 0) return sat;
  double tol = 1e-12 * std::max(1.0, m);
  for (Index i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) >= m - tol) sat.push_back(i);
  return sat;
}

Mat null_space_basis(const Mat& m, double tol) {
  const Index p = m.cols();
  if (m.rows() == 0) return Mat::Identity(p, p);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  double smax = s.size() > 0 ? s[0] : 0.0;
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s[i] > tol * std::max(1.0, smax)) ++rank;
  return svd.matrixV().rightCols(p - rank);
}

double opnorm_estimate(const Gauge& j, const Mat& basis, int probes, std::uint64_t seed) {
  if (basis.cols() == 0) return 0.0;
  auto f = [&](const Vec& u) { return j.eval(basis * u); };
  return sphere_maximize(basis.cols(), f, probes, seed);
}

namespace {

Decomposition degenerate_decomposition(Index p) {
  Decomposition d;
  d.t_basis = Mat(p, 0);
  d.e = Vec::Zero(p);
  d.jpolar_e = 0;
  d.opnorm_2_to_j = 0;
  return d;
}

}  // namespace

Decomposition Gauge::decompose(const Vec& x) const {
  check_dim(x.size(), impl_->p, "gauge decompose");
  const Index p = impl_->p;
  if (x.isZero(0.0)) return degenerate_decomposition(p);

  Decomposition out;
  switch (impl_->kind) {
    case GaugeKind::Lasso: {
      std::vector<Index> supp;
      for (Index i = 0; i < p; ++i)
        if (x[i] != 0) supp.push_back(i);
      out.t_basis = Mat::Zero(p, static_cast<Index>(supp.size()));
      out.e = Vec::Zero(p);
      for (std::size_t k = 0; k < supp.size(); ++k) {
        out.t_basis(supp[k], static_cast<Index>(k)) = 1.0;
        out.e[supp[k]] = sign_of(x[supp[k]]);
      }
      out.jpolar_e = 1.0;
      out.opnorm_2_to_j = std::sqrt(static_cast<double>(supp.size()));
      return out;
    }
    case GaugeKind::GroupLasso: {
      std::vector<Index> coords;
      out.e = Vec::Zero(p);
      Index active = 0;
      for (const auto& b : impl_->blocks) {
        double n = block_norm(x, b);
        if (n > 0) {
          ++active;
          for (Index i : b) {
            coords.push_back(i);
            out.e[i] = x[i] / n;
          }
        }
      }
      out.t_basis = Mat::Zero(p, static_cast<Index>(coords.size()));
      for (std::size_t k = 0; k < coords.size(); ++k)
        out.t_basis(coords[k], static_cast<Index>(k)) = 1.0;
      out.jpolar_e = 1.0;
      out.opnorm_2_to_j = std::sqrt(static_cast<double>(active));
      return out;
    }
    case GaugeKind::LInf: {
      std::vector<Index> sat = saturation_support(x);
      const auto ns = static_cast<double>(sat.size());
      Vec s_dir = Vec::Zero(p);
      out.e = Vec::Zero(p);
      for (Index i : sat) {
        s_dir[i] = sign_of(x[i]) / std::sqrt(ns);
        out.e[i] = sign_of(x[i]) / ns;
      }
      std::vector<Index> free;
      for (Index i = 0; i < p; ++i)
        if (std::find(sat.begin(), sat.end(), i) == sat.end()) free.push_back(i);
      out.t_basis = Mat::Zero(p, 1 + static_cast<Index>(free.size()));
      out.t_basis.col(0) = s_dir;
      for (std::size_t k = 0; k < free.size(); ++k)
        out.t_basis(free[k], static_cast<Index>(k + 1)) = 1.0;
      out.jpolar_e = 1.0;
      out.opnorm_2_to_j =
          sat.size() < static_cast<std::size_t>(p) ? 1.0 : 1.0 / std::sqrt(static_cast<double>(p));
      return out;
    }
    case GaugeKind::Nuclear: {
      const Index p1 = impl_->p1, p2 = impl_->p2;
      Eigen::Map<const Mat> m(x.data(), p1, p2);
      Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Vec& sv = svd.singularValues();
      double smax = sv[0];
      Index r = 0;
      for (Index i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-10 * std::max(1.0, smax)) ++r;
      Mat u = svd.matrixU().leftCols(r);
      Mat v = svd.matrixV().leftCols(r);
      Mat u_perp = svd.matrixU().rightCols(p1 - r);
      Mat v_perp = svd.matrixV().rightCols(p2 - r);
      const Index dim_t = r * (p1 + p2) - r * r;
      out.t_basis = Mat(p, dim_t);
      Index col = 0;
      auto put = [&](const Vec& a, const Vec& b) {
        Mat basis_elem = a * b.transpose();
        out.t_basis.col(col++) = Eigen::Map<const Vec>(basis_elem.data(), p);
      };
      for (Index i = 0; i < r; ++i)
        for (Index jj = 0; jj < r; ++jj) put(u.col(i), v.col(jj));
      for (Index i = 0; i < r; ++i)
        for (Index k = 0; k < p2 - r; ++k) put(u.col(i), v_perp.col(k));
      for (Index l = 0; l < p1 - r; ++l)
        for (Index jj = 0; jj < r; ++jj) put(u_perp.col(l), v.col(jj));
      Mat e_mat = u * v.transpose();
      out.e = Eigen::Map<const Vec>(e_mat.data(), p);
      out.jpolar_e = 1.0;
      out.opnorm_2_to_j = std::sqrt(static_cast<double>(std::min(2 * r, std::min(p1, p2))));
      return out;
    }
    case GaugeKind::AnalysisGroupLasso:
    case GaugeKind::Precomposed: {
      if (!impl_->frame_ok)
        throw FrameError("decompose: D fails the frame condition (DDᵀ singular)");
      const Mat& d = impl_->d;
      Vec u = d.transpose() * x;
      Decomposition db = base().decompose(u);
      // S_u = complement of the base model subspace at u; T = Ker(P_{S_u} Dᵀ).
      Mat proj_s = Mat::Identity(d.cols(), d.cols()) - db.t_basis * db.t_basis.transpose();
      out.t_basis = null_space_basis(proj_s * d.transpose());
      Vec de = d * db.e;
      out.e = out.t_basis * (out.t_basis.transpose() * de);
      out.jpolar_e = polar(out.e);
      out.opnorm_2_to_j = opnorm_estimate(*this, out.t_basis);
      return out;
    }
    case GaugeKind::Sum: {
      Decomposition d1 = left().decompose(x);
      Decomposition d2 = right().decompose(x);
      Mat stacked(2 * p, p);
      stacked.topRows(p) = Mat::Identity(p, p) - d1.t_basis * d1.t_basis.transpose();
      stacked.bottomRows(p) = Mat::Identity(p, p) - d2.t_basis * d2.t_basis.transpose();
      out.t_basis = null_space_basis(stacked);
      Vec esum = d1.e + d2.e;
      out.e = out.t_basis * (out.t_basis.transpose() * esum);
      out.jpolar_e = polar(out.e);
      out.opnorm_2_to_j = opnorm_estimate(*this, out.t_basis);
      return out;
    }
  }
  return degenerate_decomposition(p);
}

bool Gauge::subdiff_contains(const Vec& x, const Vec& eta, double tol) const {
  check_dim(x.size(), impl_->p, "subdiff_contains");
  check_dim(eta.size(), impl_->p, "subdiff_contains");
  if (!(tol > 0)) throw std::invalid_argument("subdiff_contains: tol must be positive");
  return polar(eta) <= 1.0 + tol && std::abs(eta.dot(x) - eval(x)) <= tol;
}

}  // namespace gpen
