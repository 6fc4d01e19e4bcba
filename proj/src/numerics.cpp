#include "fso/numerics.hpp"

#include "fso/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <mutex>
#include <cmath>
#include <utility>
#include <numbers>

namespace fso {

namespace {

// Orthonormal Hermite polynomials for weight exp(-x^2):
//   p_0 = pi^(-1/4), p_{k+1} = x sqrt(2/(k+1)) p_k - sqrt(k/(k+1)) p_{k-1}.
// Returns p_n(x) and p_{n-1}(x).
std::pair<double, double> orthonormal_hermite(int n, double x) {
  double p_prev = 0.0;
  double p = 1.0 / std::pow(std::numbers::pi, 0.25);
  for (int k = 0; k < n; ++k) {
    const double next = x * std::sqrt(2.0 / (k + 1)) * p - std::sqrt(static_cast<double>(k) / (k + 1)) * p_prev;
    p_prev = p;
    p = next;
  }
  return {p, p_prev};
}

}  // namespace

QuadratureRule gauss_hermite_rule(int order) {
  if (order < 1 || order > kMaxQuadratureOrder) {
    throw DomainError("Gauss-Hermite order must be in [1, 64]");
  }
  const int n = order;

  // Jacobi matrix of the monic Hermite recurrence: zero diagonal,
  // off-diagonal sqrt(k/2).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& guesses = solver.eigenvalues();

  QuadratureRule rule;
  rule.order = n;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = guesses(i);
    // Newton on p_n, using p_n' = sqrt(2n) p_{n-1}.
    for (int iter = 0; iter < 8; ++iter) {
      const auto [p, p_prev] = orthonormal_hermite(n, x);
      const double step = p / (std::sqrt(2.0 * n) * p_prev);
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    const double deriv = std::sqrt(2.0 * n) * orthonormal_hermite(n, x).second;
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / (deriv * deriv);
  }
  // Exact symmetry: mirror the positive half onto the negative half.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[j] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const QuadratureRule& cached_gauss_hermite_rule(int order) {
  if (order < 1 || order > kMaxQuadratureOrder) {
    throw DomainError("Gauss-Hermite order must be in [1, 64]");
  }
  static std::array<std::once_flag, kMaxQuadratureOrder + 1> flags;
  static std::array<QuadratureRule, kMaxQuadratureOrder + 1> rules;
  std::call_once(flags[order], [order] { rules[order] = gauss_hermite_rule(order); });
  return rules[order];
}

Eigen::MatrixXd symmetric_matrix_sqrt(const Eigen::MatrixXd& gamma) {
  if (gamma.rows() != gamma.cols() || gamma.rows() == 0) {
    throw FactorizationError("matrix square root needs a non-empty square matrix");
  }
  if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw FactorizationError("matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gamma);
  if (solver.info() != Eigen::Success) throw FactorizationError("eigendecomposition failed");
  Eigen::VectorXd roots = solver.eigenvalues();
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    if (roots(i) < -1e-12) throw FactorizationError("matrix is not positive semidefinite");
    roots(i) = roots(i) < 0.0 ? 0.0 : std::sqrt(roots(i));
  }
  const Eigen::MatrixXd& v = solver.eigenvectors();
  Eigen::MatrixXd root = v * roots.asDiagonal() * v.transpose();
  // Symmetrize away rounding.
  return 0.5 * (root + root.transpose());
}

}  // namespace fso
