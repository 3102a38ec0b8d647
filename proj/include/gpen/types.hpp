#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gpen {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Thrown when a D operator fails the frame condition (D Dᵀ singular).
struct FrameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when an inner iterative scheme exceeds its iteration budget.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

inline void check_dim(Index got, Index want, const char* where) {
  if (got != want)
    throw std::invalid_argument(std::string(where) + ": dimension mismatch, got " +
                                std::to_string(got) + ", expected " + std::to_string(want));
}

}  // namespace gpen
