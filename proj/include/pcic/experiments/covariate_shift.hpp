#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "pcic/criteria.hpp"
#include "pcic/experiments/report.hpp"
#include "pcic/models/covariate_shift.hpp"
#include "pcic/numkit/rng.hpp"
#include "pcic/sampler.hpp"

namespace pcic::experiments {

using models::NormalParams;
using models::RegressionPair;

/// 0.01, 0.02, ..., 2.00
std::vector<double> default_lambda_grid();

struct CovariateShiftConfig {
  std::size_t n_train = 50;
  std::size_t n_test = 50;
  NormalParams train{0.0, 1.0};
  NormalParams test{0.5, 0.3};
  double noise_sd = 0.25;
  std::vector<double> lambdas = default_lambda_grid();
  double prior_var = 1.0;
  std::uint64_t seed = 1;
  std::size_t replications = 1;
  std::size_t draws = 4000;
  /// Covariates in the large-test oracle; 0 disables it.
  std::size_t oracle_test_points = 100000;

  /// Throws ConfigError.
  void validate() const;
  nlohmann::json to_json() const;
};

/// sin(pi x) / (pi x), with sinc(0) = 1.
double sinc(double x);

/// n pairs with x from `law` and y = sinc(x) + noise_sd * N(0, 1).
std::vector<RegressionPair> gen_sinc_pairs(std::size_t n, const NormalParams& law, double noise_sd, RngStream& rng);

struct CovariateShiftData {
  std::vector<RegressionPair> train;
  std::vector<RegressionPair> test;
};

CovariateShiftData gen_covariate_shift(const CovariateShiftConfig& cfg, RngStream& rng);

/// Design matrix with rows (1, x).
Matrix line_features(const std::vector<RegressionPair>& data);

/// Exact quasi-posterior of the straight-line model: score weights r^lambda,
/// known noise, prior N(0, prior_var I).
GaussianPosterior covariate_shift_posterior(const models::CovariateShiftModel& model,
                                            const std::vector<RegressionPair>& data);

/// -(1/m) sum_t log mean_s h(y_t | x_t, theta_s) over a held-out set.
double test_set_error(const models::CovariateShiftModel& model, const std::vector<RegressionPair>& test,
                      const Draws& draws);

/// Expected negative log posterior-predictive density over the test law,
/// integrating y exactly and averaging over the supplied test covariates.
double predictive_oracle_error(const GaussianPosterior& post, double noise_sd, const std::vector<double>& test_x);

struct LambdaResult {
  double lambda = 0.0;
  CriterionValue pcic;
  CriterionValue waic;
  CriterionValue iscv;
  double test_error = 0.0;
  double oracle_error = 0.0;  ///< NaN when the large-test oracle is disabled
  Vector posterior_mean;
};

/// One replication across the whole lambda grid; throws on numerical failure.
std::vector<LambdaResult> covariate_shift_replication(const CovariateShiftConfig& cfg, std::size_t replication);

ReplicationReport run_covariate_shift(const CovariateShiftConfig& cfg);

/// Aggregates and plot data are pure functions of the record table.
nlohmann::json covariate_shift_aggregates(const Table& records);
Table covariate_shift_plot(const Table& records);

}  // namespace pcic::experiments
