#include "gpen/polytope.hpp"

namespace gpen {

std::vector<Vec> polytope_vertices(const Gauge& j) {
  const Index p = j.dim();
  std::vector<Vec> verts;
  switch (j.kind()) {
    case GaugeKind::Lasso:
      verts.reserve(static_cast<std::size_t>(2 * p));
      for (Index i = 0; i < p; ++i) {
        Vec v = Vec::Zero(p);
        v[i] = 1.0;
        verts.push_back(v);
        v[i] = -1.0;
        verts.push_back(v);
      }
      return verts;
    case GaugeKind::LInf: {
      if (p > 20)
        throw std::invalid_argument("polytope_vertices: hypercube with p > 20 refused (2^p)");
      const std::size_t count = std::size_t{1} << p;
      verts.reserve(count);
      for (std::size_t mask = 0; mask < count; ++mask) {
        Vec v(p);
        for (Index i = 0; i < p; ++i) v[i] = (mask >> i) & 1 ? 1.0 : -1.0;
        verts.push_back(v);
      }
      return verts;
    }
    default:
      throw std::invalid_argument("polytope_vertices: unsupported penalty " + j.name());
  }
}

}  // namespace gpen
