#pragma once

#include <vector>

#include "gpen/gauge.hpp"

namespace gpen {

/// Vertices of the unit ball {J <= 1} for polyhedral penalties:
/// Lasso → ±a_i (cross-polytope, 2p vertices); LInf → {±1}^p (hypercube,
/// 2^p vertices, refused for p > 20). Other penalties are unsupported.
std::vector<Vec> polytope_vertices(const Gauge& j);

}  // namespace gpen
