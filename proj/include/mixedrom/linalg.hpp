#pragma once

#include <Eigen/Dense>

namespace mixedrom {

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // column k pairs with values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for a dense symmetric matrix. The input is
/// symmetrized as (C + C^T)/2. Iterates until the off-diagonal Frobenius norm
/// drops below rel_tol * ||C||_F. Throws Error(Stage::Pod) after max_sweeps.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& c, double rel_tol = 1e-12, int max_sweeps = 100);

}  // namespace mixedrom
