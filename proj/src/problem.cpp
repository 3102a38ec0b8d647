#include "gpen/problem.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "gpen/fb.hpp"
#include "gpen/rng.hpp"

namespace gpen {

namespace {

constexpr std::uint64_t kDesignStream = 0xd351;
constexpr std::uint64_t kSignalStream = 0x5160;
constexpr std::uint64_t kNoiseStream = 0x40153;

Blocks contiguous_blocks(Index p, Index k) {
  if (k <= 0 || p % k != 0)
    throw std::invalid_argument("problem: block_size must divide p");
  Blocks blocks;
  for (Index b = 0; b < p / k; ++b) {
    std::vector<Index> blk(static_cast<std::size_t>(k));
    std::iota(blk.begin(), blk.end(), b * k);
    blocks.push_back(std::move(blk));
  }
  return blocks;
}

Mat raw_design(const ProblemSpec& spec) {
  const Index n = spec.n, d = spec.ambient_dim();
  switch (spec.design) {
    case DesignKind::Identity:
      return Mat::Identity(n, d);
    case DesignKind::Custom:
      if (spec.custom_design.rows() != n || spec.custom_design.cols() != d)
        throw std::invalid_argument("problem: custom design has wrong shape");
      return spec.custom_design;
    case DesignKind::GaussianNormalized: {
      CounterRng rng(spec.seed, kDesignStream);
      Mat x(n, d);
      for (Index i = 0; i < n; ++i)
        for (Index jj = 0; jj < d; ++jj) x(i, jj) = rng.normal();
      return x;
    }
  }
  return {};
}

/// Largest block Gram norm max_b ‖X_bᵀX_b‖_{2→2}.
double max_block_gram(const Mat& x, const Blocks& blocks) {
  double m = 0;
  for (const auto& b : blocks) {
    Mat xb(x.rows(), static_cast<Index>(b.size()));
    for (std::size_t k = 0; k < b.size(); ++k) xb.col(static_cast<Index>(k)) = x.col(b[k]);
    m = std::max(m, spectral_norm_sq(xb));
  }
  return m;
}

/// v(X) for the nuclear design: rows are flattened p1 x p2 measurement
/// matrices (column-major).
double nuclear_v(const Mat& x, Index p1, Index p2) {
  Mat left = Mat::Zero(p1, p1);
  Mat right = Mat::Zero(p2, p2);
  for (Index i = 0; i < x.rows(); ++i) {
    Eigen::Map<const Mat> mi(x.row(i).data(), p1, p2);
    // Map over a row expression is unsafe; copy the row first.
    Vec row = x.row(i);
    Eigen::Map<const Mat> m(row.data(), p1, p2);
    left += m * m.transpose();
    right += m.transpose() * m;
    (void)mi;
  }
  Eigen::SelfAdjointEigenSolver<Mat> el(left), er(right);
  return std::max(el.eigenvalues().maxCoeff(), er.eigenvalues().maxCoeff());
}

void normalize_design(Mat& x, const ProblemSpec& spec) {
  const auto n = static_cast<double>(spec.n);
  const bool custom = spec.design == DesignKind::Custom;
  switch (spec.penalty) {
    case PenaltyChoice::Lasso: {
      if (!custom) {
        for (Index i = 0; i < x.cols(); ++i) {
          double cn = x.col(i).norm();
          if (cn > 0) x.col(i) *= std::sqrt(n) / cn;
        }
      }
      for (Index i = 0; i < x.cols(); ++i)
        if (x.col(i).norm() > std::sqrt(n) * (1 + 1e-9))
          throw std::invalid_argument("problem: lasso design violates max column norm <= sqrt(n)");
      break;
    }
    case PenaltyChoice::Group: {
      Blocks blocks = contiguous_blocks(spec.p, spec.block_size);
      double m = max_block_gram(x, blocks);
      if (!custom && m > 0) x *= std::sqrt(n / m);
      if (max_block_gram(x, blocks) > n * (1 + 1e-9))
        throw std::invalid_argument("problem: group design violates block Gram norm <= n");
      break;
    }
    case PenaltyChoice::Analysis: {
      Mat d = spec.analysis_d.size() > 0 ? spec.analysis_d : Mat::Identity(spec.p, spec.p);
      Blocks blocks = contiguous_blocks(d.cols(), spec.block_size);
      Mat xd = x * d;
      double m = max_block_gram(xd, blocks);
      if (!custom && m > 0) x *= std::sqrt(n / m);
      if (max_block_gram(Mat(x * d), blocks) > n * (1 + 1e-9))
        throw std::invalid_argument("problem: analysis design violates block Gram norm <= n");
      break;
    }
    case PenaltyChoice::LInf: {
      double m = x.cwiseAbs().maxCoeff();
      double bound = 1.0 / static_cast<double>(spec.p);
      if (!custom && m > 0) x *= bound / m;
      if (x.cwiseAbs().maxCoeff() > bound * (1 + 1e-9))
        throw std::invalid_argument("problem: linf design violates max entry <= 1/p");
      break;
    }
    case PenaltyChoice::Nuclear: {
      double v = nuclear_v(x, spec.p1, spec.p2);
      if (!custom && v > 0) x *= std::sqrt(n / v);
      if (nuclear_v(x, spec.p1, spec.p2) > n * (1 + 1e-9))
        throw std::invalid_argument("problem: nuclear design violates v(X) <= n");
      break;
    }
  }
}

Vec make_signal(const ProblemSpec& spec) {
  CounterRng rng(spec.seed, kSignalStream);
  const Index d = spec.ambient_dim();
  Vec x0 = Vec::Zero(d);
  switch (spec.signal) {
    case SignalKind::Sparse: {
      if (spec.sparsity > d) throw std::invalid_argument("problem: sparsity exceeds dimension");
      std::vector<Index> perm(static_cast<std::size_t>(d));
      std::iota(perm.begin(), perm.end(), 0);
      for (Index i = d - 1; i > 0; --i)
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[static_cast<std::size_t>(rng.next_u64() % static_cast<std::uint64_t>(i + 1))]);
      for (int k = 0; k < spec.sparsity; ++k)
        x0[perm[static_cast<std::size_t>(k)]] = spec.amplitude * rng.sign();
      break;
    }
    case SignalKind::GroupSparse: {
      Index l = spec.num_blocks();
      if (spec.active_blocks > l)
        throw std::invalid_argument("problem: active_blocks exceeds number of blocks");
      std::vector<Index> perm(static_cast<std::size_t>(l));
      std::iota(perm.begin(), perm.end(), 0);
      for (Index i = l - 1; i > 0; --i)
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[static_cast<std::size_t>(rng.next_u64() % static_cast<std::uint64_t>(i + 1))]);
      for (int k = 0; k < spec.active_blocks; ++k) {
        Index b = perm[static_cast<std::size_t>(k)];
        for (Index i = b * spec.block_size; i < (b + 1) * spec.block_size; ++i)
          x0[i] = spec.amplitude * rng.sign();
      }
      break;
    }
    case SignalKind::Saturated: {
      if (spec.sat_size > d || spec.sat_size < 1)
        throw std::invalid_argument("problem: sat_size out of range");
      std::vector<Index> perm(static_cast<std::size_t>(d));
      std::iota(perm.begin(), perm.end(), 0);
      for (Index i = d - 1; i > 0; --i)
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[static_cast<std::size_t>(rng.next_u64() % static_cast<std::uint64_t>(i + 1))]);
      for (Index k = 0; k < d; ++k) {
        Index i = perm[static_cast<std::size_t>(k)];
        x0[i] = k < spec.sat_size ? spec.amplitude * rng.sign()
                                  : spec.amplitude * (rng.uniform() - 0.5);
      }
      break;
    }
    case SignalKind::LowRank: {
      if (spec.rank > std::min(spec.p1, spec.p2))
        throw std::invalid_argument("problem: rank exceeds min(p1, p2)");
      Mat gu(spec.p1, spec.rank), gv(spec.p2, spec.rank);
      for (Index i = 0; i < gu.size(); ++i) gu.data()[i] = rng.normal();
      for (Index i = 0; i < gv.size(); ++i) gv.data()[i] = rng.normal();
      Mat qu = Eigen::HouseholderQR<Mat>(gu).householderQ() * Mat::Identity(spec.p1, spec.rank);
      Mat qv = Eigen::HouseholderQR<Mat>(gv).householderQ() * Mat::Identity(spec.p2, spec.rank);
      Mat m = spec.amplitude * qu * qv.transpose();
      x0 = Eigen::Map<const Vec>(m.data(), d);
      break;
    }
  }
  return x0;
}

}  // namespace

Gauge make_gauge(const ProblemSpec& spec) {
  switch (spec.penalty) {
    case PenaltyChoice::Lasso:
      return Gauge::lasso(spec.p);
    case PenaltyChoice::Group:
      return Gauge::group_lasso(spec.p, contiguous_blocks(spec.p, spec.block_size));
    case PenaltyChoice::Analysis: {
      Mat d = spec.analysis_d.size() > 0 ? spec.analysis_d : Mat::Identity(spec.p, spec.p);
      return Gauge::analysis_group_lasso(d, contiguous_blocks(d.cols(), spec.block_size));
    }
    case PenaltyChoice::LInf:
      return Gauge::linf(spec.p);
    case PenaltyChoice::Nuclear:
      return Gauge::nuclear(spec.p1, spec.p2);
  }
  throw std::invalid_argument("make_gauge: unknown penalty");
}

Vec draw_noise(const ProblemSpec& spec, std::uint64_t trial) {
  CounterRng rng(spec.seed, kNoiseStream + trial);
  Vec xi(spec.n);
  for (Index i = 0; i < spec.n; ++i)
    xi[i] = spec.noise == NoiseKind::Gaussian ? spec.sigma * rng.normal()
                                              : spec.sigma * rng.sign();
  return xi;
}

Problem generate_problem(const ProblemSpec& spec) {
  if (spec.n <= 0) throw std::invalid_argument("problem: n must be positive");
  if (spec.penalty == PenaltyChoice::Nuclear && (spec.p1 <= 0 || spec.p2 <= 0))
    throw std::invalid_argument("problem: nuclear penalty needs p1, p2");
  Problem pr{Mat(), Vec(), Vec(), Vec(), make_gauge(spec), spec.sigma};
  pr.x = raw_design(spec);
  normalize_design(pr.x, spec);
  pr.x0 = make_signal(spec);
  pr.xi = draw_noise(spec, 0);
  pr.y = pr.x * pr.x0 + pr.xi;
  return pr;
}

}  // namespace gpen
