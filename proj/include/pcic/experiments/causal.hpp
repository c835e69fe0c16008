#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "pcic/criteria.hpp"
#include "pcic/experiments/oracle.hpp"
#include "pcic/experiments/report.hpp"
#include "pcic/models/ipw_causal.hpp"
#include "pcic/numkit/rng.hpp"

namespace pcic::experiments {

struct CausalConfig {
  std::size_t n = 50;
  std::vector<double> doses{-1.0, -0.6, -0.2, 0.2, 0.6, 1.0};
  /// Treatment h is assigned with probability proportional to exp(slope * z * x^(h)).
  double assignment_slope = 0.5;
  double noise_sd = 1.0;
  double confounder_half_width = std::sqrt(3.0);
  double model_variance = 2.0;
  double prior_var = 1000.0;
  std::vector<std::vector<int>> candidates{{0}, {0, 1}, {0, 1, 2}};
  std::uint64_t seed = 1;
  std::size_t replications = 200;
  std::size_t draws = 4000;
  std::size_t wloss_replicates = 500;

  void validate() const;
  nlohmann::json to_json() const;
};

/// 1 + x + 0.5 x^2
double causal_outcome_mean(double x);

/// Softmax propensity of each configured dose given the confounder z.
std::vector<double> assignment_probabilities(const CausalConfig& cfg, double z);

struct CausalIndividual {
  double z = 0.0;
  std::vector<double> potential;   ///< Y^(h) for every h
  std::vector<double> propensity;  ///< e^(h)
  std::size_t treatment = 0;
};

struct CausalDataset {
  std::vector<double> doses;
  std::vector<CausalIndividual> individuals;

  /// (Y, x^(T), e^(T)) for each individual's received treatment.
  std::vector<models::CausalObservation> observed() const;
};

CausalDataset gen_causal(const CausalConfig& cfg, RngStream& rng);

/// Exact conjugate quasi-posterior of a candidate with weights 1/e.
GaussianPosterior causal_posterior(const models::IpwCausalModel& model,
                                   const std::vector<models::CausalObservation>& data);

/// WLOSS/n: holding (x, z, T) fixed, redraw the received outcome `replicates`
/// times and average -(1/n) sum_i (1/e_i) log p(Y~_i | x_i) under the exact
/// Gaussian posterior predictive.
OracleEstimate wloss_oracle(const CausalConfig& cfg, const models::IpwCausalModel& model, const CausalDataset& data,
                            const GaussianPosterior& post, RngStream& rng);

struct CandidateResult {
  CriterionValue pcic;
  CriterionValue iscv;
  double pcic_variance_form = 0.0;  ///< fit + (1/n) sum (1/e)^2 V_pos[log h]
  OracleEstimate wloss;
};

std::vector<CandidateResult> causal_replication(const CausalConfig& cfg, std::size_t replication);

ReplicationReport run_causal(const CausalConfig& cfg);
nlohmann::json causal_aggregates(const Table& records);
Table causal_plot(const Table& records);

std::string candidate_label(const std::vector<int>& powers);

}  // namespace pcic::experiments
