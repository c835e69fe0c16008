#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "pcic/experiments/report.hpp"
#include "pcic/models/location_family.hpp"
#include "pcic/numkit/rng.hpp"
#include "pcic/sampler.hpp"

namespace pcic::experiments {

using models::LocationFamily;

struct QuasiBayesConfig {
  std::vector<std::size_t> sample_sizes{10, 20, 100};
  std::vector<LocationFamily> truths{LocationFamily::normal, LocationFamily::cauchy};
  std::vector<LocationFamily> candidates{LocationFamily::normal, LocationFamily::laplace, LocationFamily::cauchy};
  std::size_t replications = 100;
  std::uint64_t seed = 1;
  std::size_t draws = 4000;
  std::size_t burn_in = 2000;
  std::size_t thin = 1;
  double init_step = 1.0;
  double prior_sd = 10.0;
  double true_location = 0.0;
  /// Fresh test points per oracle evaluation; 0 disables the oracle.
  std::size_t oracle_test_points = 10000;
  /// Evenly thinned subset of the retained draws used by the oracle.
  std::size_t oracle_draws = 500;

  void validate() const;
  nlohmann::json to_json() const;
};

/// N draws of true_location + unit-scale noise from `truth`.
std::vector<double> gen_location_data(LocationFamily truth, double location, std::size_t n, RngStream& rng);

struct CandidateScores {
  double pcic = 0.0;
  double pcic_penalty = 0.0;
  double waic = 0.0;
  double waic_penalty = 0.0;
  double penalty_gap = 0.0;
  double oracle = 0.0;  ///< NaN when disabled
};

struct QuasiBayesReplication {
  std::vector<CandidateScores> candidates;
  std::size_t selected_pcic = 0;
  std::size_t selected_waic = 0;
  double acceptance_rate = 0.0;
  double ess = 0.0;
};

/// Laplace-score quasi-posterior of the location by random-walk Metropolis.
Draws location_quasi_posterior(const QuasiBayesConfig& cfg, const std::vector<double>& data, RngStream& rng);

/// One repetition in the (truth, N) cell; throws on sampler failure.
QuasiBayesReplication quasibayes_replication(const QuasiBayesConfig& cfg, LocationFamily truth, std::size_t n,
                                             std::size_t replication);

ReplicationReport run_quasibayes(const QuasiBayesConfig& cfg);
nlohmann::json quasibayes_aggregates(const Table& records, const std::vector<FailedReplication>& failures);
Table quasibayes_plot(const Table& records);

}  // namespace pcic::experiments
