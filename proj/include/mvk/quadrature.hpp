#ifndef MVK_QUADRATURE_HPP
#define MVK_QUADRATURE_HPP

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mvk/error.hpp"

namespace mvk {

struct QuadratureRule {
  std::vector<double> nodes;
  /// Normalized: weights sum to 1.
  std::vector<double> weights;
};

/// Generalized Gauss-Laguerre rule for the probability density
/// r^alpha e^{-r} / Gamma(alpha + 1) on (0, inf), by Golub-Welsch.
inline QuadratureRule gauss_laguerre(int n, double alpha) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  if (!(alpha > -1.0)) throw DomainError("Laguerre quadrature needs alpha > -1");
  Eigen::VectorXd diag(n), off(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(k * (k + alpha));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw TruncationError("Golub-Welsch eigensolver failed");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = solver.eigenvalues()(k);
    const double v = solver.eigenvectors()(0, k);
    rule.weights[k] = v * v;
  }
  return rule;
}

}  // namespace mvk

#endif  // MVK_QUADRATURE_HPP
