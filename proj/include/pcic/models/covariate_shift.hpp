#pragma once

#include "pcic/models/model_spec.hpp"

namespace pcic::models {

struct NormalParams {
  double mean = 0.0;
  double sd = 1.0;
};

/// log p_test(x) - log p_train(x) for two normal covariate laws.
double log_density_ratio(double x, const NormalParams& train, const NormalParams& test);

/// r(x) = p_test(x) / p_train(x), evaluated in the log domain.
double density_ratio(double x, const NormalParams& train, const NormalParams& test);

struct RegressionPair {
  double x = 0.0;
  double y = 0.0;
};

/// Straight-line regression y ~ N(theta_0 + theta_1 x, sigma^2) trained on
/// the tilted quasi-likelihood sum_i r(x_i)^lambda log h(y_i | x_i, theta) and
/// evaluated with importance weight r(x_i). Noise sigma is known.
class CovariateShiftModel {
 public:
  using Datum = RegressionPair;

  CovariateShiftModel(double lambda, double noise_sd, NormalParams train, NormalParams test,
                      double prior_var = 1.0);

  std::size_t dim() const { return 2; }
  double lambda() const { return lambda_; }
  double noise_sd() const { return noise_sd_; }
  const NormalParams& train_law() const { return train_; }
  const NormalParams& test_law() const { return test_; }
  double prior_var() const { return prior_var_; }

  double ratio(double x) const { return density_ratio(x, train_, test_); }
  /// r(x)^lambda, the multiplier of log h in the training score.
  double score_weight(double x) const;

  double log_prior(const Vector& theta) const;
  double log_pred(const Datum& d, const Vector& theta) const;
  double score(const Datum& d, const Vector& theta) const { return score_weight(d.x) * log_pred(d, theta); }
  double weight(const Datum& d) const { return ratio(d.x); }

  Vector log_pred_gradient(const Datum& d, const Vector& theta) const;
  Matrix log_pred_hessian(const Datum& d, const Vector& theta) const;
  Vector score_gradient(const Datum& d, const Vector& theta) const {
    return score_weight(d.x) * log_pred_gradient(d, theta);
  }
  Matrix score_hessian(const Datum& d, const Vector& theta) const {
    return score_weight(d.x) * log_pred_hessian(d, theta);
  }

 private:
  double lambda_;
  double noise_sd_;
  NormalParams train_;
  NormalParams test_;
  double prior_var_;
};

}  // namespace pcic::models
