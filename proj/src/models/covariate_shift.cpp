#include "pcic/models/covariate_shift.hpp"

#include <cmath>

#include "pcic/numkit/distributions.hpp"

namespace pcic::models {

namespace {

void require_law(const NormalParams& p, const char* name) {
  if (!(p.sd > 0.0) || !std::isfinite(p.sd) || !std::isfinite(p.mean)) {
    throw ParameterError(std::string(name) + " covariate law needs finite mean and positive sd");
  }
}

}  // namespace

double log_density_ratio(double x, const NormalParams& train, const NormalParams& test) {
  require_law(train, "train");
  require_law(test, "test");
  return normal_log_pdf(x, test.mean, test.sd) - normal_log_pdf(x, train.mean, train.sd);
}

double density_ratio(double x, const NormalParams& train, const NormalParams& test) {
  return std::exp(log_density_ratio(x, train, test));
}

CovariateShiftModel::CovariateShiftModel(double lambda, double noise_sd, NormalParams train, NormalParams test,
                                         double prior_var)
    : lambda_(lambda), noise_sd_(noise_sd), train_(train), test_(test), prior_var_(prior_var) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("tilting parameter must be >= 0");
  if (!(noise_sd > 0.0)) throw ParameterError("noise sd must be positive");
  if (!(prior_var > 0.0)) throw ParameterError("prior variance must be positive");
  require_law(train, "train");
  require_law(test, "test");
}

double CovariateShiftModel::score_weight(double x) const {
  return std::exp(lambda_ * log_density_ratio(x, train_, test_));
}

double CovariateShiftModel::log_prior(const Vector& theta) const {
  const double sd = std::sqrt(prior_var_);
  return normal_log_pdf(theta(0), 0.0, sd) + normal_log_pdf(theta(1), 0.0, sd);
}

double CovariateShiftModel::log_pred(const Datum& d, const Vector& theta) const {
  return normal_log_pdf(d.y, theta(0) + theta(1) * d.x, noise_sd_);
}

Vector CovariateShiftModel::log_pred_gradient(const Datum& d, const Vector& theta) const {
  const double resid = (d.y - theta(0) - theta(1) * d.x) / (noise_sd_ * noise_sd_);
  return Vector{{resid, resid * d.x}};
}

Matrix CovariateShiftModel::log_pred_hessian(const Datum& d, const Vector&) const {
  const double inv = 1.0 / (noise_sd_ * noise_sd_);
  Matrix h(2, 2);
  h << -inv, -inv * d.x, -inv * d.x, -inv * d.x * d.x;
  return h;
}

}  // namespace pcic::models
