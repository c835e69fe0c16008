#include "pcic/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pcic/numkit/errors.hpp"
#include "pcic/numkit/reductions.hpp"

namespace pcic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kUnstableLogRatio = std::log(1e3);

std::span<const double> row(const RowMatrix& m, std::size_t i) {
  return {m.data() + i * static_cast<std::size_t>(m.cols()), static_cast<std::size_t>(m.cols())};
}

bool has_neg_inf(std::span<const double> values) {
  return std::any_of(values.begin(), values.end(), [](double v) { return v == -kInf; });
}

void check_weights(std::span<const double> weights, std::size_t n, const char* what) {
  if (weights.size() != n) {
    throw ArgumentError(std::string(what) + ": expected " + std::to_string(n) + " weights, got " +
                        std::to_string(weights.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw DataError(std::string(what) + ": weight " + std::to_string(i) + " must be positive and finite");
    }
  }
}

// Weighted per-observation sums in fixed serial order.
void finish(CriterionValue& out, std::span<const double> fit_w, std::span<const double> pen_w) {
  const double n = static_cast<double>(out.per_observation.size());
  double fit = 0.0;
  double pen = 0.0;
  for (std::size_t i = 0; i < out.per_observation.size(); ++i) {
    fit += fit_w[i] * out.per_observation[i].fit;
    pen += pen_w[i] * out.per_observation[i].penalty;
  }
  out.fit = fit / n;
  out.penalty = pen / n;
  out.total = out.fit + out.penalty;
}

enum class PenaltyKind { covariance, variance };

CriterionValue fit_plus_moment(const EvalBundle& bundle, PenaltyKind kind,
                               std::span<const double> penalty_weights) {
  bundle.validate();
  const std::size_t n = bundle.observations();
  CriterionValue out;
  out.per_observation.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto lp = row(bundle.log_pred, i);
    auto& term = out.per_observation[i];
    term.fit = -log_mean_exp(lp);
    if (has_neg_inf(lp)) {
      out.infinite_log_pred.push_back(i);
      term.penalty = kInf;
      continue;
    }
    const auto m = kind == PenaltyKind::covariance ? moments_over_draws(lp, row(bundle.score, i))
                                                   : moments_over_draws(lp, lp);
    term.penalty = kind == PenaltyKind::covariance ? m.cov_fg : m.var_f;
  }
  finish(out, bundle.weights, penalty_weights);
  return out;
}

}  // namespace

void EvalBundle::validate() const {
  if (log_pred.rows() != score.rows() || log_pred.cols() != score.cols()) {
    throw ArgumentError("EvalBundle: log_pred and score shapes differ");
  }
  if (log_pred.rows() == 0 || log_pred.cols() == 0) throw ArgumentError("EvalBundle: empty matrices");
  const std::size_t n = observations();
  check_weights(weights, n, "EvalBundle");
  if (variance_weights) check_weights(*variance_weights, n, "EvalBundle variance weights");
  for (Eigen::Index i = 0; i < log_pred.rows(); ++i) {
    for (Eigen::Index s = 0; s < log_pred.cols(); ++s) {
      const double lp = log_pred(i, s);
      if (std::isnan(lp) || lp == kInf) {
        throw DataError("EvalBundle: log_pred(" + std::to_string(i) + ", " + std::to_string(s) +
                        ") is NaN or +inf");
      }
      if (!std::isfinite(score(i, s))) {
        throw DataError("EvalBundle: score(" + std::to_string(i) + ", " + std::to_string(s) +
                        ") is not finite");
      }
    }
  }
}

CriterionValue compute_pcic(const EvalBundle& bundle) {
  return fit_plus_moment(bundle, PenaltyKind::covariance, bundle.weights);
}

CriterionValue compute_waic(const EvalBundle& bundle, std::optional<std::span<const double>> penalty_weights) {
  if (penalty_weights) {
    check_weights(*penalty_weights, bundle.observations(), "compute_waic penalty weights");
    return fit_plus_moment(bundle, PenaltyKind::variance, *penalty_weights);
  }
  return fit_plus_moment(bundle, PenaltyKind::variance, bundle.weights);
}

CriterionValue compute_iscv_wq(const EvalBundle& bundle) {
  bundle.validate();
  const std::size_t n = bundle.observations();
  const std::size_t draws = bundle.draws();
  CriterionValue out;
  out.per_observation.resize(n);
  std::vector<double> scratch(draws);
  for (std::size_t i = 0; i < n; ++i) {
    const auto lp = row(bundle.log_pred, i);
    const auto sc = row(bundle.score, i);
    if (has_neg_inf(lp)) out.infinite_log_pred.push_back(i);

    for (std::size_t s = 0; s < draws; ++s) scratch[s] = lp[s] - sc[s];
    out.per_observation[i].fit = -log_mean_exp(scratch);

    double max_neg_score = -kInf;
    for (std::size_t s = 0; s < draws; ++s) {
      scratch[s] = -sc[s];
      max_neg_score = std::max(max_neg_score, scratch[s]);
    }
    const double lme = log_mean_exp(scratch);
    out.per_observation[i].penalty = lme;
    if (max_neg_score - lme > kUnstableLogRatio) out.unstable_importance.push_back(i);
  }
  finish(out, bundle.weights, bundle.weights);
  return out;
}

double penalty_gap(const EvalBundle& bundle) {
  return compute_pcic(bundle).penalty - compute_waic(bundle).penalty;
}

}  // namespace pcic
