#pragma once

#include <Eigen/Dense>

#include <vector>

namespace fso {

/// Gauss-Hermite rule for the weight exp(-x^2) (physicists' convention).
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // positive, sum to sqrt(pi)
};

inline constexpr int kMaxQuadratureOrder = 64;

/// Order-N rule, 1 <= N <= 64. Nodes come from the Jacobi-matrix eigenproblem
/// and are then Newton-polished; weights use the derivative formula so that
/// tail weights keep full relative precision.
QuadratureRule gauss_hermite_rule(int order);

/// Process-wide, lazily built copy of gauss_hermite_rule(order); thread-safe.
const QuadratureRule& cached_gauss_hermite_rule(int order);

/// Symmetric PSD square root via eigendecomposition. Eigenvalues in
/// [-1e-12, 0) are clamped to zero; anything worse, or an asymmetry above
/// 1e-12, throws FactorizationError.
Eigen::MatrixXd symmetric_matrix_sqrt(const Eigen::MatrixXd& gamma);

}  // namespace fso
