#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "gpen/types.hpp"

namespace gpen {

enum class GaugeKind { Lasso, GroupLasso, AnalysisGroupLasso, LInf, Nuclear, Sum, Precomposed };

using Blocks = std::vector<std::vector<Index>>;

/// Structure of a penalty at a point: orthonormal basis of the model subspace
/// T, the model vector e, its polar value J°(e) and the operator norm
/// ‖P_T‖_{2→J}. At x = 0 everything degenerates to (T = {0}, e = 0).
struct Decomposition {
  Mat t_basis;           // p x dim(T), orthonormal columns
  Vec e;                 // model vector, lies in span(t_basis)
  double jpolar_e = 0;   // J°(e)
  double opnorm_2_to_j = 0;

  Index subspace_dim() const { return t_basis.cols(); }
  Vec project(const Vec& v) const {
    if (t_basis.cols() == 0) return Vec::Zero(v.size());
    return t_basis * (t_basis.transpose() * v);
  }
};

struct ProxOptions {
  double tol = 1e-10;     // inner fixed-point residual
  int max_iters = 10000;  // inner iteration budget
  Vec* warm_start = nullptr;  // optional dual warm start, updated in place
};

/// Largest/smallest eigenvalues of D Dᵀ.
struct FrameConstants {
  double upper = 0;  // c
  double lower = 0;  // d
};

/// A positively homogeneous, coercive penalty given by the gauge of a compact
/// convex set with the origin in its interior. Instances are immutable and
/// cheap to copy; all operations are const and thread-safe.
class Gauge {
 public:
  static Gauge lasso(Index p);
  static Gauge group_lasso(Index p, Blocks blocks);
  /// J(x) = sum of block norms of Dᵀx; D is p x q with full row rank,
  /// blocks partition {0..q-1}.
  static Gauge analysis_group_lasso(Mat d, Blocks blocks);
  static Gauge linf(Index p);
  /// Matrices in R^{p1 x p2}, flattened column-major into R^{p1 p2}.
  static Gauge nuclear(Index p1, Index p2);
  static Gauge sum(Gauge a, Gauge b);
  /// H(x) = base(Dᵀx); D is dim x q. Evaluation and prox only need Dᵀ
  /// injective on the relevant range; polar and decompose require the frame
  /// condition (D surjective) and throw FrameError otherwise.
  static Gauge precompose(Gauge base, Mat d);

  GaugeKind kind() const;
  Index dim() const;  // ambient dimension p (p1*p2 for Nuclear)

  double eval(const Vec& x) const;
  double polar(const Vec& w) const;
  /// argmin_u 1/2 ‖u − x‖² + t J(u), t > 0.
  Vec prox(const Vec& x, double t, const ProxOptions& opts = {}) const;
  Decomposition decompose(const Vec& x) const;
  /// Membership in ∂J(x) via the gauge characterization
  /// J°(eta) <= 1 + tol and |<eta, x> − J(x)| <= tol.
  bool subdiff_contains(const Vec& x, const Vec& eta, double tol) const;

  const Blocks& blocks() const;
  const Mat& d_matrix() const;       // AnalysisGroupLasso / Precomposed
  Index p1() const;                  // Nuclear
  Index p2() const;
  const Gauge& left() const;         // Sum
  const Gauge& right() const;
  const Gauge& base() const;         // Precomposed
  FrameConstants frame_constants() const;  // extreme eigenvalues of D Dᵀ

  std::string name() const;

 private:
  struct Impl;
  explicit Gauge(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Euclidean projection onto the l1 ball of given radius (sort-based).
Vec project_l1_ball(const Vec& x, double radius);

/// Saturation support of x for the l∞ penalty; |x_i| within 1e-12 of the max
/// (relative) are snapped onto it. Empty iff x = 0.
std::vector<Index> saturation_support(const Vec& x);

/// Orthonormal basis of the null space of M (p columns); empty basis when the
/// null space is trivial.
Mat null_space_basis(const Mat& m, double tol = 1e-10);

/// sup over unit u of J(B u) for an orthonormal basis B, by random probing
/// plus local ascent. Deterministic for a fixed seed.
double opnorm_estimate(const Gauge& j, const Mat& basis, int probes = 10000,
                       std::uint64_t seed = 12345);

}  // namespace gpen
