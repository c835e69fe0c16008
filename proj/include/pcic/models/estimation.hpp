#pragma once

#include <cstdint>
#include <functional>

#include "pcic/models/model_spec.hpp"
#include "pcic/numkit/derivatives.hpp"
#include "pcic/numkit/distributions.hpp"
#include "pcic/numkit/rng.hpp"

namespace pcic::models {

struct SimplexResult {
  Vector point;
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Nelder-Mead minimisation (standard coefficients 1, 2, 1/2, 1/2).
/// Converged once the largest vertex-to-vertex distance drops below
/// `diameter_tol`.
SimplexResult nelder_mead_minimize(const std::function<double(const Vector&)>& objective, const Vector& start,
                                   double initial_step, double diameter_tol, std::size_t max_iterations);

struct MEstimate {
  Vector theta;
  double objective = 0.0;  ///< sum_i s_i(X_i, theta_hat)
  bool converged = false;
  std::size_t iterations = 0;
};

struct MEstimateOptions {
  std::uint64_t seed = 0;
  std::size_t restarts = 3;
  double diameter_tol = 1e-9;
  double initial_step = 0.5;
  std::size_t max_iterations = 20000;
};

template <class M>
concept HasExactMEstimate = ModelSpec<M> && requires(const M& m, const std::vector<typename M::Datum>& data) {
  { m.exact_m_estimate(data) } -> std::convertible_to<Vector>;
};

template <ModelSpec M>
double summed_score(const M& model, const std::vector<typename M::Datum>& data, const Vector& theta) {
  double acc = 0.0;
  for (const auto& datum : data) acc += model.score(datum, theta);
  return acc;
}

/// Maximiser of sum_i s_i(X_i, theta) (the prior is ignored). Models with a
/// closed-form maximiser use it; otherwise Nelder-Mead from `init`, followed
/// by `restarts` runs from seeded random perturbations of the incumbent.
/// Throws EstimationError (with the best point) if no run converged.
template <ModelSpec M>
MEstimate m_estimate(const M& model, const std::vector<typename M::Datum>& data, const Vector& init,
                     const MEstimateOptions& options = {}) {
  if (data.empty()) throw ArgumentError("m_estimate: empty dataset");
  if (static_cast<std::size_t>(init.size()) != model.dim()) throw ArgumentError("m_estimate: init has wrong dimension");
  if constexpr (HasExactMEstimate<M>) {
    MEstimate out;
    out.theta = model.exact_m_estimate(data);
    out.objective = summed_score(model, data, out.theta);
    out.converged = true;
    return out;
  } else {
    const auto negated = [&](const Vector& theta) {
      const double v = summed_score(model, data, theta);
      return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
    };
    if (!std::isfinite(negated(init))) throw ArgumentError("m_estimate: objective is not finite at init");

    SimplexResult best = nelder_mead_minimize(negated, init, options.initial_step, options.diameter_tol,
                                              options.max_iterations);
    std::size_t iterations = best.iterations;
    bool any_converged = best.converged;
    RngStream rng = substream(options.seed, 0);
    for (std::size_t r = 0; r < options.restarts; ++r) {
      Vector start = best.point;
      for (Eigen::Index j = 0; j < start.size(); ++j) {
        start(j) += options.initial_step * std::max(1.0, std::abs(start(j))) * standard_normal(rng);
      }
      if (!std::isfinite(negated(start))) start = best.point;
      SimplexResult run = nelder_mead_minimize(negated, start, options.initial_step, options.diameter_tol,
                                               options.max_iterations);
      iterations += run.iterations;
      any_converged = any_converged || run.converged;
      if (run.value < best.value || (run.value == best.value && run.converged && !best.converged)) best = run;
    }
    if (!any_converged) {
      throw EstimationError("m_estimate: Nelder-Mead did not converge",
                            std::vector<double>(best.point.data(), best.point.data() + best.point.size()));
    }
    MEstimate out;
    out.theta = best.point;
    out.objective = -best.value;
    out.converged = true;
    out.iterations = iterations;
    return out;
  }
}

/// Empirical information matrices at theta:
///   I_H = (1/n) sum w_i g_h g_h^T,  J_H = -(1/n) sum w_i H_h,
///   I_S = (1/n) sum g_s g_s^T,      J_S = -(1/n) sum H_s,
/// with g, H the gradient and Hessian of log h_i (suffix h) and s_i (suffix s).
struct InfoMatrices {
  Matrix i_h;
  Matrix j_h;
  Matrix i_s;
  Matrix j_s;
  Vector theta;
  /// Set when J_S is not positive definite (warning only).
  bool j_s_indefinite = false;
};

enum class DerivativeMode { automatic, finite_difference };

template <ModelSpec M>
InfoMatrices empirical_info_matrices(const M& model, const std::vector<typename M::Datum>& data, const Vector& theta,
                                     DerivativeMode mode = DerivativeMode::automatic) {
  if (data.empty()) throw ArgumentError("empirical_info_matrices: empty dataset");
  const auto d = static_cast<Eigen::Index>(model.dim());
  if (theta.size() != d) throw ArgumentError("empirical_info_matrices: theta has wrong dimension");
  InfoMatrices out;
  out.theta = theta;
  out.i_h = Matrix::Zero(d, d);
  out.j_h = Matrix::Zero(d, d);
  out.i_s = Matrix::Zero(d, d);
  out.j_s = Matrix::Zero(d, d);
  for (const auto& datum : data) {
    Vector gh, gs;
    Matrix hh, hs;
    bool analytic = false;
    if constexpr (HasAnalyticDerivatives<M>) {
      if (mode == DerivativeMode::automatic) {
        gh = model.log_pred_gradient(datum, theta);
        hh = model.log_pred_hessian(datum, theta);
        gs = model.score_gradient(datum, theta);
        hs = model.score_hessian(datum, theta);
        analytic = true;
      }
    }
    if (!analytic) {
      const auto lh = [&](const Vector& t) { return model.log_pred(datum, t); };
      const auto sc = [&](const Vector& t) { return model.score(datum, t); };
      gh = fd_gradient(lh, theta);
      hh = fd_hessian(lh, theta);
      gs = fd_gradient(sc, theta);
      hs = fd_hessian(sc, theta);
    }
    const double w = model.weight(datum);
    out.i_h.noalias() += w * gh * gh.transpose();
    out.j_h.noalias() -= w * hh;
    out.i_s.noalias() += gs * gs.transpose();
    out.j_s.noalias() -= hs;
  }
  const double n = static_cast<double>(data.size());
  out.i_h /= n;
  out.j_h /= n;
  out.i_s /= n;
  out.j_s /= n;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (out.j_s + out.j_s.transpose()), Eigen::EigenvaluesOnly);
  out.j_s_indefinite = !(eig.eigenvalues().minCoeff() > 0.0);
  return out;
}

/// [tr(J_H J_S^-1 I_S J_S^-1) + tr(J_H J_S^-1) - tr(I_H J_S^-1)] / (2n).
/// Throws NumericalError when cond(J_S) >= 1e12.
double theoretical_penalty(const InfoMatrices& info, std::size_t n);

struct GicValue {
  double total = 0.0;
  double fit = 0.0;      ///< -(1/n) sum log h(X_i | theta_hat)
  double penalty = 0.0;  ///< tr(J_S^-1 C) / n
  Vector theta_hat;
};

/// tr(J_S^{-1} C) / n with C = (1/n) sum grad s_i grad log h_i^T.
template <ModelSpec M>
GicValue compute_gic(const M& model, const std::vector<typename M::Datum>& data, const Vector& init,
                     const MEstimateOptions& options = {}) {
  const MEstimate est = m_estimate(model, data, init, options);
  const auto d = static_cast<Eigen::Index>(model.dim());
  const double n = static_cast<double>(data.size());
  GicValue out;
  out.theta_hat = est.theta;
  Matrix cross = Matrix::Zero(d, d);
  double fit = 0.0;
  for (const auto& datum : data) {
    fit -= model.log_pred(datum, est.theta);
    Vector gs, gh;
    if constexpr (HasAnalyticDerivatives<M>) {
      gs = model.score_gradient(datum, est.theta);
      gh = model.log_pred_gradient(datum, est.theta);
    } else {
      gs = fd_gradient([&](const Vector& t) { return model.score(datum, t); }, est.theta);
      gh = fd_gradient([&](const Vector& t) { return model.log_pred(datum, t); }, est.theta);
    }
    cross.noalias() += gs * gh.transpose();
  }
  cross /= n;
  const InfoMatrices info = empirical_info_matrices(model, data, est.theta);
  const Matrix j_s_inv = guarded_inverse(info.j_s);
  out.fit = fit / n;
  out.penalty = (j_s_inv * cross).trace() / n;
  out.total = out.fit + out.penalty;
  return out;
}

}  // namespace pcic::models
