#include "rhc/tridiagonal.hpp"

#include <cmath>
#include <string>

#include "rhc/errors.hpp"

namespace rhc {

bool TridiagonalSystem::diagonally_dominant() const {
  const Eigen::Index n = size();
  bool strict = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    double off = 0.0;
    if (i > 0) off += std::abs(lower[i]);
    if (i + 1 < n) off += std::abs(upper[i]);
    const double d = std::abs(diag[i]);
    if (d < off) return false;
    if (d > off) strict = true;
  }
  return strict;
}

Eigen::VectorXd TridiagonalSystem::multiply(const Eigen::VectorXd& x) const {
  const Eigen::Index n = size();
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += lower[i] * x[i - 1];
    if (i + 1 < n) s += upper[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

Eigen::VectorXd tridiagonal_solve(const TridiagonalSystem& sys) {
  const Eigen::Index n = sys.size();
  if (n == 0) throw InvalidArgument("tridiagonal_solve: empty system");
  if (sys.lower.size() != n || sys.upper.size() != n || sys.rhs.size() != n)
    throw InvalidArgument("tridiagonal_solve: band/rhs length mismatch");

  const double scale = sys.diag.cwiseAbs().maxCoeff() +
                       sys.lower.cwiseAbs().maxCoeff() +
                       sys.upper.cwiseAbs().maxCoeff();
  const double pivot_tol = 1e-14 * (scale > 0.0 ? scale : 1.0);

  Eigen::VectorXd c(n);  // modified upper band
  Eigen::VectorXd d(n);  // modified rhs
  double pivot = sys.diag[0];
  if (std::abs(pivot) <= pivot_tol)
    throw NumericFailure("tridiagonal_solve: zero pivot at row 0");
  c[0] = sys.upper[0] / pivot;
  d[0] = sys.rhs[0] / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = sys.diag[i] - sys.lower[i] * c[i - 1];
    if (std::abs(pivot) <= pivot_tol)
      throw NumericFailure("tridiagonal_solve: zero pivot at row " +
                           std::to_string(i));
    c[i] = (i + 1 < n) ? sys.upper[i] / pivot : 0.0;
    d[i] = (sys.rhs[i] - sys.lower[i] * d[i - 1]) / pivot;
  }

  Eigen::VectorXd x(n);
  x[n - 1] = d[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];

  if (!x.allFinite()) throw NumericFailure("tridiagonal_solve: non-finite solution");
  const double rhs_norm = sys.rhs.cwiseAbs().maxCoeff();
  const double residual = (sys.multiply(x) - sys.rhs).cwiseAbs().maxCoeff();
  if (residual > 1e-10 * rhs_norm)
    throw NumericFailure("tridiagonal_solve: residual " + std::to_string(residual) +
                         " exceeds tolerance (ill-conditioned or singular system)");
  return x;
}

}  // namespace rhc
