#include "pcic/models/ipw_causal.hpp"

#include <cmath>

#include "pcic/numkit/distributions.hpp"

namespace pcic::models {

IpwCausalModel::IpwCausalModel(std::vector<int> powers, double outcome_variance, double prior_var)
    : powers_(std::move(powers)), variance_(outcome_variance), prior_var_(prior_var) {
  if (powers_.empty()) throw ParameterError("causal model needs at least one feature");
  for (int p : powers_) {
    if (p < 0) throw ParameterError("feature powers must be non-negative");
  }
  if (!(variance_ > 0.0)) throw ParameterError("outcome variance must be positive");
  if (!(prior_var_ > 0.0)) throw ParameterError("prior variance must be positive");
}

Vector IpwCausalModel::features(double x) const {
  Vector f(static_cast<Eigen::Index>(powers_.size()));
  for (std::size_t k = 0; k < powers_.size(); ++k) f(static_cast<Eigen::Index>(k)) = std::pow(x, powers_[k]);
  return f;
}

double IpwCausalModel::log_prior(const Vector& theta) const {
  const double sd = std::sqrt(prior_var_);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < theta.size(); ++k) acc += normal_log_pdf(theta(k), 0.0, sd);
  return acc;
}

double IpwCausalModel::log_pred(const Datum& d, const Vector& theta) const {
  double mean = 0.0;
  for (std::size_t k = 0; k < powers_.size(); ++k) mean += theta(static_cast<Eigen::Index>(k)) * std::pow(d.x, powers_[k]);
  return normal_log_pdf(d.y, mean, std::sqrt(variance_));
}

Vector IpwCausalModel::log_pred_gradient(const Datum& d, const Vector& theta) const {
  const Vector f = features(d.x);
  return ((d.y - f.dot(theta)) / variance_) * f;
}

Matrix IpwCausalModel::log_pred_hessian(const Datum& d, const Vector&) const {
  const Vector f = features(d.x);
  return -(f * f.transpose()) / variance_;
}

}  // namespace pcic::models
