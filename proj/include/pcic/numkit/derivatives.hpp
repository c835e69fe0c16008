#pragma once

#include <cmath>
#include <limits>

#include "pcic/numkit/linalg.hpp"

namespace pcic {

/// Central-difference step eps^{1/3} * max(1, |theta_j|).
inline double fd_step(double theta_j) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * std::max(1.0, std::abs(theta_j));
}

template <class F>
Vector fd_gradient(F&& f, const Vector& theta) {
  Vector grad(theta.size());
  Vector probe = theta;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    const double h = fd_step(theta(j));
    probe(j) = theta(j) + h;
    const double up = f(probe);
    probe(j) = theta(j) - h;
    const double down = f(probe);
    probe(j) = theta(j);
    grad(j) = (up - down) / (2.0 * h);
  }
  return grad;
}

/// Four-point central stencil for every (j, k) pair, symmetric by construction.
template <class F>
Matrix fd_hessian(F&& f, const Vector& theta) {
  const Eigen::Index d = theta.size();
  Matrix hess(d, d);
  Vector probe = theta;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double hj = fd_step(theta(j));
    for (Eigen::Index k = j; k < d; ++k) {
      const double hk = fd_step(theta(k));
      auto eval = [&](double sj, double sk) {
        probe = theta;
        probe(j) += sj * hj;
        probe(k) += sk * hk;
        return f(probe);
      };
      const double v = (eval(1, 1) - eval(1, -1) - eval(-1, 1) + eval(-1, -1)) / (4.0 * hj * hk);
      hess(j, k) = v;
      hess(k, j) = v;
    }
  }
  return hess;
}

}  // namespace pcic
