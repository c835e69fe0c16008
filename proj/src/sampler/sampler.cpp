#include "pcic/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pcic/numkit/distributions.hpp"
#include "pcic/numkit/errors.hpp"

namespace pcic {

namespace {

std::vector<double> chain_ess(const RowMatrix& samples) {
  std::vector<double> out(static_cast<std::size_t>(samples.cols()));
  if (samples.rows() < 10) {
    std::fill(out.begin(), out.end(), static_cast<double>(samples.rows()));
    return out;
  }
  std::vector<double> column(static_cast<std::size_t>(samples.rows()));
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    for (Eigen::Index s = 0; s < samples.rows(); ++s) column[static_cast<std::size_t>(s)] = samples(s, j);
    out[static_cast<std::size_t>(j)] = ess(column).value;
  }
  return out;
}

}  // namespace

Draws rwm_sample(const LogTarget& log_target, ChainConfig config) {
  if (config.draws == 0 || config.thin == 0) throw ArgumentError("rwm_sample: draws and thin must be positive");
  if (config.init.size() == 0) throw ArgumentError("rwm_sample: empty initial point");
  if (!(config.init_step > 0.0)) throw ArgumentError("rwm_sample: init_step must be positive");

  const Eigen::Index dim = config.init.size();
  Vector current = config.init;
  double current_lp = log_target(current);
  if (std::isnan(current_lp)) throw TargetError("rwm_sample: log target is NaN at the initial point",
                                                std::vector<double>(current.data(), current.data() + dim));
  if (current_lp == -std::numeric_limits<double>::infinity()) {
    throw InitializationError("rwm_sample: log target is -inf at the initial point");
  }

  RngStream& rng = config.rng;
  double log_step = std::log(config.init_step);
  Draws out;
  out.method = SamplerMethod::metropolis;
  out.samples.resize(static_cast<Eigen::Index>(config.draws), dim);

  const std::size_t total = config.burn_in + config.draws * config.thin;
  std::size_t accepted_after_burn = 0;
  std::size_t proposals_after_burn = 0;
  std::size_t kept = 0;
  Vector proposal(dim);

  for (std::size_t t = 0; t < total; ++t) {
    const double step = std::exp(log_step);
    for (Eigen::Index j = 0; j < dim; ++j) proposal(j) = current(j) + step * standard_normal(rng);
    const double prop_lp = log_target(proposal);
    if (std::isnan(prop_lp)) {
      throw TargetError("rwm_sample: log target returned NaN",
                        std::vector<double>(proposal.data(), proposal.data() + dim));
    }
    const double log_ratio = prop_lp - current_lp;
    const double accept_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
    const bool accept = rng.uniform01() < accept_prob;
    if (accept) {
      current = proposal;
      current_lp = prop_lp;
    }

    if (t < config.burn_in) {
      const double gain = std::pow(static_cast<double>(t) + 1.0, -0.6);
      log_step += gain * (accept_prob - config.target_acceptance);
      continue;
    }
    ++proposals_after_burn;
    if (accept) ++accepted_after_burn;
    const std::size_t since = t - config.burn_in;
    if ((since + 1) % config.thin == 0) {
      out.samples.row(static_cast<Eigen::Index>(kept++)) = current.transpose();
    }
  }

  out.acceptance_rate = static_cast<double>(accepted_after_burn) / static_cast<double>(proposals_after_burn);
  out.ess_per_dim = chain_ess(out.samples);
  return out;
}

GaussianPosterior conjugate_gaussian_posterior(const Matrix& features, std::span<const double> y,
                                               std::span<const double> weights, double sigma2,
                                               const Vector& prior_mean, const Matrix& prior_cov) {
  const Eigen::Index d = prior_mean.size();
  if (prior_cov.rows() != d || prior_cov.cols() != d) throw ArgumentError("conjugate posterior: prior shape mismatch");
  if (features.rows() != static_cast<Eigen::Index>(y.size()) || y.size() != weights.size()) {
    throw ArgumentError("conjugate posterior: features, y and weights lengths differ");
  }
  if (features.rows() > 0 && features.cols() != d) throw ArgumentError("conjugate posterior: feature dimension mismatch");
  if (!(sigma2 > 0.0)) throw ParameterError("conjugate posterior: sigma2 must be positive");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DataError("conjugate posterior: weights must be positive and finite");
  }

  Matrix prior_precision;
  try {
    prior_precision = spd_inverse(prior_cov);
  } catch (const DecompositionError&) {
    throw NumericalError("conjugate posterior: prior covariance is not positive definite");
  }
  Matrix precision = prior_precision;
  Vector rhs = prior_precision * prior_mean;
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const double wi = weights[static_cast<std::size_t>(i)] / sigma2;
    const auto f = features.row(i);
    precision.noalias() += wi * f.transpose() * f;
    rhs.noalias() += (wi * y[static_cast<std::size_t>(i)]) * f.transpose();
  }
  precision = 0.5 * (precision + precision.transpose());
  Matrix lower;
  try {
    lower = chol_factor(precision);
  } catch (const DecompositionError& e) {
    throw NumericalError(std::string("conjugate posterior: singular precision (") + e.what() + ")");
  }
  GaussianPosterior post;
  post.mean = chol_solve(lower, rhs);
  const auto tri = lower.triangularView<Eigen::Lower>();
  Matrix linv = tri.solve(Matrix::Identity(d, d));
  post.cov = linv.transpose() * linv;
  post.cov = 0.5 * (post.cov + post.cov.transpose());
  return post;
}

Draws sample_mvn(const Vector& mean, const Matrix& cov, std::size_t count, RngStream& rng) {
  if (count == 0) throw ArgumentError("sample_mvn: count must be positive");
  const Matrix lower = chol_factor(cov);
  const Eigen::Index d = mean.size();
  Draws out;
  out.method = SamplerMethod::exact;
  out.acceptance_rate = 1.0;
  out.samples.resize(static_cast<Eigen::Index>(count), d);
  Vector z(d);
  for (std::size_t s = 0; s < count; ++s) {
    for (Eigen::Index j = 0; j < d; ++j) z(j) = standard_normal(rng);
    out.samples.row(static_cast<Eigen::Index>(s)) = (mean + lower * z).transpose();
  }
  out.ess_per_dim.assign(static_cast<std::size_t>(d), static_cast<double>(count));
  return out;
}

EssResult ess(std::span<const double> chain) {
  const std::size_t n = chain.size();
  if (n < 10) throw ArgumentError("ess: need at least 10 draws");
  double mean = 0.0;
  for (double v : chain) mean += v;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double v : chain) c0 += (v - mean) * (v - mean);
  c0 /= static_cast<double>(n);
  if (!(c0 > 0.0)) return {static_cast<double>(n), true};

  double rho_sum = 0.0;
  for (std::size_t lag = 1; lag < n; ++lag) {
    double c = 0.0;
    for (std::size_t s = 0; s + lag < n; ++s) c += (chain[s] - mean) * (chain[s + lag] - mean);
    const double rho = c / static_cast<double>(n) / c0;
    if (rho < 0.0) break;
    rho_sum += rho;
  }
  const double value = static_cast<double>(n) / (1.0 + 2.0 * rho_sum);
  return {std::clamp(value, 1.0, static_cast<double>(n)), false};
}

}  // namespace pcic
