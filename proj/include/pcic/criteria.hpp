#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pcic/numkit/linalg.hpp"

namespace pcic {

/// Per-observation evaluations at every posterior draw: entry (i, s) of
/// log_pred is log h_i(X_i | theta_s) and of score is s_i(X_i, theta_s).
struct EvalBundle {
  RowMatrix log_pred;
  RowMatrix score;
  std::vector<double> weights;
  /// Optional second weight sequence for variance-type penalties (the
  /// squared IPW weights of the causal model). Informational; criteria use
  /// it only when passed explicitly.
  std::optional<std::vector<double>> variance_weights;

  std::size_t observations() const { return static_cast<std::size_t>(log_pred.rows()); }
  std::size_t draws() const { return static_cast<std::size_t>(log_pred.cols()); }

  /// Throws ArgumentError on shape mismatch and DataError on NaN, +inf in
  /// log_pred, non-finite score or non-positive weight.
  void validate() const;
};

/// Unweighted per-observation contributions; the criterion total is
/// (1/n) sum_i w_i fit_i + (1/n) sum_i v_i penalty_i, with v = w unless a
/// separate penalty weight sequence was supplied.
struct ObservationTerms {
  double fit = 0.0;
  double penalty = 0.0;
};

struct CriterionValue {
  double total = 0.0;
  double fit = 0.0;
  double penalty = 0.0;
  std::vector<ObservationTerms> per_observation;
  /// Observations whose log_pred row contains -inf. Fit is +inf when the
  /// whole row is -inf; variance-type penalties are +inf for any -inf.
  std::vector<std::size_t> infinite_log_pred;
  /// IS-CV only: observations whose largest importance ratio exp(-s) exceeds
  /// 1e3 times the mean ratio. Diagnostic; no truncation is applied.
  std::vector<std::size_t> unstable_importance;
};

/// Posterior covariance information criterion:
///   fit     = -(1/n) sum_i w_i log mean_s exp(log_pred(i, s))
///   penalty =  (1/n) sum_i w_i Cov_s(log_pred(i, .), score(i, .))
CriterionValue compute_pcic(const EvalBundle& bundle);

/// WAIC with the bundle weights on the fit term and `penalty_weights` (default:
/// the bundle weights) on the posterior-variance term.
CriterionValue compute_waic(const EvalBundle& bundle,
                            std::optional<std::span<const double>> penalty_weights = std::nullopt);

/// Weighted quasi-Bayesian importance-sampling leave-one-out CV:
///   fit     = -(1/n) sum_i w_i log mean_s exp(log_pred - score)
///   penalty =  (1/n) sum_i w_i log mean_s exp(-score)
CriterionValue compute_iscv_wq(const EvalBundle& bundle);

/// pcic.penalty - waic.penalty with identical weights on both penalties.
double penalty_gap(const EvalBundle& bundle);

}  // namespace pcic
