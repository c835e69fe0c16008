#pragma once

#include <Eigen/Dense>

namespace pcic {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
/// Row-major storage so that a row (one observation across draws, or one
/// draw across parameters) is contiguous.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Lower-triangular L with L L^T = A. Requires A square and symmetric to
/// 1e-10 (relative to its largest entry); throws DecompositionError naming
/// the first non-positive pivot.
Matrix chol_factor(const Matrix& a);

/// Solves A x = b given L = chol_factor(A).
Vector chol_solve(const Matrix& lower, const Vector& b);

/// A^{-1} for symmetric positive definite A, symmetrised.
Matrix spd_inverse(const Matrix& a);

/// General inverse with a condition-number guard (LU with a 2-norm
/// estimate from the singular values). Throws NumericalError when
/// cond(A) >= max_condition.
Matrix guarded_inverse(const Matrix& a, double max_condition = 1e12);

}  // namespace pcic
