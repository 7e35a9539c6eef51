#pragma once

#include <Eigen/Dense>

namespace rhc {

/// Row i reads lower[i] * x[i-1] + diag[i] * x[i] + upper[i] * x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored.
struct TridiagonalSystem {
  Eigen::VectorXd lower;
  Eigen::VectorXd diag;
  Eigen::VectorXd upper;
  Eigen::VectorXd rhs;

  Eigen::Index size() const { return diag.size(); }

  /// Weak diagonal dominance with at least one strictly dominant row.
  bool diagonally_dominant() const;

  /// A * x, for residual checks.
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
};

/// Thomas algorithm. Throws NumericFailure on a vanishing pivot or when the
/// residual ||A x - rhs||_inf exceeds 1e-10 ||rhs||_inf.
Eigen::VectorXd tridiagonal_solve(const TridiagonalSystem& sys);

}  // namespace rhc
