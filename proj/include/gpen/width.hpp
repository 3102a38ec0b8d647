#pragma once

#include "gpen/gauge.hpp"
#include "gpen/types.hpp"

namespace gpen {

struct WidthQuery {
  Gauge j;
  Mat x;               // design; the set measured is X({J <= 1})
  int mc_samples = 100000;  // must be >= 1000
  std::uint64_t seed = 0;
};

struct WidthResult {
  double mean = 0;
  double std_error = 0;
  int samples = 0;
  std::uint64_t seed = 0;
};

/// Monte-Carlo Gaussian width w(X·C) = E[J°(Xᵀg)], g ~ N(0, I_n).
/// Sample i is a pure function of (seed, i) and the reduction is done in
/// index order, so the parallel and serial kernels return identical results.
WidthResult gaussian_width(const WidthQuery& q);         // OpenMP over samples
WidthResult gaussian_width_serial(const WidthQuery& q);  // reference kernel

/// Same width through the vertex route E[max_v <Xv, g>] for polyhedral J.
WidthResult gaussian_width_vertices(const Mat& x, const std::vector<Vec>& vertices,
                                    int mc_samples, std::uint64_t seed);

}  // namespace gpen
