#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pcic/numkit/linalg.hpp"
#include "pcic/numkit/rng.hpp"

namespace pcic {

enum class SamplerMethod { exact, metropolis };

/// Retained quasi-posterior draws, one row per draw.
struct Draws {
  RowMatrix samples;
  double acceptance_rate = 1.0;
  std::vector<double> ess_per_dim;
  SamplerMethod method = SamplerMethod::exact;

  std::size_t count() const { return static_cast<std::size_t>(samples.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(samples.cols()); }
  Vector draw(std::size_t s) const { return samples.row(static_cast<Eigen::Index>(s)).transpose(); }
};

struct ChainConfig {
  std::size_t draws = 4000;
  std::size_t burn_in = 2000;
  std::size_t thin = 1;
  Vector init;
  double init_step = 1.0;
  RngStream rng{0, 0};
  double target_acceptance = 0.3;
};

using LogTarget = std::function<double(const Vector&)>;

/// Gaussian random-walk Metropolis with an isotropic proposal. During
/// burn-in the log step size follows a Robbins-Monro recursion toward the
/// target acceptance rate; the step is frozen afterwards so the retained
/// chain is a time-homogeneous Markov chain.
Draws rwm_sample(const LogTarget& log_target, ChainConfig config);

struct GaussianPosterior {
  Vector mean;
  Matrix cov;
};

/// Exact posterior of theta under log-likelihood sum_i w_i log N(y_i; f_i^T theta, sigma2)
/// and prior N(prior_mean, prior_cov):
///   precision = prior_cov^{-1} + sum_i w_i f_i f_i^T / sigma2.
GaussianPosterior conjugate_gaussian_posterior(const Matrix& features, std::span<const double> y,
                                               std::span<const double> weights, double sigma2,
                                               const Vector& prior_mean, const Matrix& prior_cov);

/// S independent draws mean + L z.
Draws sample_mvn(const Vector& mean, const Matrix& cov, std::size_t count, RngStream& rng);

struct EssResult {
  double value = 0.0;
  bool constant_chain = false;
};

/// S / (1 + 2 sum_k rho_k), summing autocorrelations up to (not including)
/// the first negative lag; clipped to [1, S]. Requires S >= 10.
EssResult ess(std::span<const double> chain);

}  // namespace pcic
