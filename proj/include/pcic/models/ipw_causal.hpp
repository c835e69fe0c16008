#pragma once

#include <vector>

#include "pcic/models/model_spec.hpp"

namespace pcic::models {

/// The observed (treatment-received) outcome of one individual together with
/// the dose x^(h) of that treatment and its known propensity e^(h).
struct CausalObservation {
  double y = 0.0;
  double x = 0.0;
  double propensity = 1.0;
};

/// Polynomial outcome model N(sum_k theta_k x^{p_k}, variance) fitted by
/// inverse-probability-weighted quasi-likelihood. Only the received treatment
/// contributes for each individual (T = 1), so the weight is 1/e.
class IpwCausalModel {
 public:
  using Datum = CausalObservation;

  /// `powers` selects the feature set, e.g. {0, 1, 2} for (1, x, x^2).
  explicit IpwCausalModel(std::vector<int> powers, double outcome_variance = 2.0, double prior_var = 1000.0);

  std::size_t dim() const { return powers_.size(); }
  const std::vector<int>& powers() const { return powers_; }
  double outcome_variance() const { return variance_; }
  double prior_var() const { return prior_var_; }

  Vector features(double x) const;

  double log_prior(const Vector& theta) const;
  double log_pred(const Datum& d, const Vector& theta) const;
  double score(const Datum& d, const Vector& theta) const { return weight(d) * log_pred(d, theta); }
  double weight(const Datum& d) const { return 1.0 / d.propensity; }
  double variance_weight(const Datum& d) const { return weight(d) * weight(d); }

  Vector log_pred_gradient(const Datum& d, const Vector& theta) const;
  Matrix log_pred_hessian(const Datum& d, const Vector& theta) const;
  Vector score_gradient(const Datum& d, const Vector& theta) const { return weight(d) * log_pred_gradient(d, theta); }
  Matrix score_hessian(const Datum& d, const Vector& theta) const { return weight(d) * log_pred_hessian(d, theta); }

 private:
  std::vector<int> powers_;
  double variance_;
  double prior_var_;
};

}  // namespace pcic::models
