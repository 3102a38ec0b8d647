#include "gpen/width.hpp"

#include <cmath>
#include <vector>

#include "gpen/rng.hpp"

namespace gpen {

namespace {

WidthResult reduce_in_order(const std::vector<double>& values, std::uint64_t seed) {
  WidthResult res;
  res.samples = static_cast<int>(values.size());
  res.seed = seed;
  double sum = 0;
  for (double v : values) sum += v;
  res.mean = sum / res.samples;
  double ss = 0;
  for (double v : values) ss += (v - res.mean) * (v - res.mean);
  res.std_error = std::sqrt(ss / (res.samples - 1) / res.samples);
  return res;
}

double width_sample(const WidthQuery& q, int i) {
  CounterRng rng(q.seed, static_cast<std::uint64_t>(i));
  Vec g = rng.normal_vec(q.x.rows());
  return q.j.polar(q.x.transpose() * g);
}

void validate(const WidthQuery& q) {
  check_dim(q.x.cols(), q.j.dim(), "gaussian_width");
  if (q.mc_samples < 1000)
    throw std::invalid_argument("gaussian_width: mc_samples must be >= 1000");
}

}  // namespace

WidthResult gaussian_width_serial(const WidthQuery& q) {
  validate(q);
  std::vector<double> values(static_cast<std::size_t>(q.mc_samples));
  for (int i = 0; i < q.mc_samples; ++i) values[static_cast<std::size_t>(i)] = width_sample(q, i);
  return reduce_in_order(values, q.seed);
}

WidthResult gaussian_width(const WidthQuery& q) {
  validate(q);
  std::vector<double> values(static_cast<std::size_t>(q.mc_samples));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < q.mc_samples; ++i) values[static_cast<std::size_t>(i)] = width_sample(q, i);
  return reduce_in_order(values, q.seed);
}

WidthResult gaussian_width_vertices(const Mat& x, const std::vector<Vec>& vertices,
                                    int mc_samples, std::uint64_t seed) {
  if (vertices.empty()) throw std::invalid_argument("gaussian_width_vertices: no vertices");
  if (mc_samples < 1000)
    throw std::invalid_argument("gaussian_width_vertices: mc_samples must be >= 1000");
  Mat imgs(x.rows(), static_cast<Index>(vertices.size()));
  for (std::size_t k = 0; k < vertices.size(); ++k) imgs.col(static_cast<Index>(k)) = x * vertices[k];
  std::vector<double> values(static_cast<std::size_t>(mc_samples));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < mc_samples; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    Vec g = rng.normal_vec(x.rows());
    values[static_cast<std::size_t>(i)] = (imgs.transpose() * g).maxCoeff();
  }
  return reduce_in_order(values, seed);
}

}  // namespace gpen
