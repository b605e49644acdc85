#pragma once

#include <Eigen/Core>

namespace sdetect {

struct SymmetricEigen
{
  Eigen::VectorXd values;  ///< ascending
  Eigen::MatrixXd vectors; ///< column i pairs with values[i]
  int sweeps{ 0 };
  bool converged{ false };
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps over all (p, q) pairs until the off-diagonal Frobenius norm falls
/// below rel_tol * ||A||_F. Only the upper triangle is trusted for the
/// rotation angles; callers must check symmetry beforehand.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, double rel_tol = 1e-15,
                            int max_sweeps = 100);

} // namespace sdetect
