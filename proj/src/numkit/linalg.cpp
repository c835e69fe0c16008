#include "pcic/numkit/linalg.hpp"

#include <cmath>
#include <string>

#include "pcic/numkit/errors.hpp"

namespace pcic {

Matrix chol_factor(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw ArgumentError("chol_factor: matrix must be square and nonempty");
  const Eigen::Index d = a.rows();
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ArgumentError("chol_factor: matrix is not symmetric");
  }
  Matrix lower = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double pivot = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= lower(j, k) * lower(j, k);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw DecompositionError("chol_factor: non-positive pivot at index " + std::to_string(j),
                               static_cast<std::size_t>(j));
    }
    const double diag = std::sqrt(pivot);
    lower(j, j) = diag;
    for (Eigen::Index i = j + 1; i < d; ++i) {
      double v = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= lower(i, k) * lower(j, k);
      lower(i, j) = v / diag;
    }
  }
  return lower;
}

Vector chol_solve(const Matrix& lower, const Vector& b) {
  const auto tri = lower.triangularView<Eigen::Lower>();
  Vector y = tri.solve(b);
  return tri.transpose().solve(y);
}

Matrix spd_inverse(const Matrix& a) {
  const Matrix lower = chol_factor(a);
  const auto tri = lower.triangularView<Eigen::Lower>();
  Matrix linv = tri.solve(Matrix::Identity(a.rows(), a.cols()));
  Matrix inv = linv.transpose() * linv;
  return 0.5 * (inv + inv.transpose());
}

Matrix guarded_inverse(const Matrix& a, double max_condition) {
  if (a.rows() != a.cols() || a.rows() == 0) throw ArgumentError("guarded_inverse: matrix must be square");
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || !(smax / smin < max_condition)) {
    throw NumericalError("matrix is singular or ill-conditioned (condition number " +
                         std::to_string(smin > 0.0 ? smax / smin : INFINITY) + ")");
  }
  return a.fullPivLu().inverse();
}

}  // namespace pcic
