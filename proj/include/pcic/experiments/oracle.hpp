#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pcic/models/model_spec.hpp"
#include "pcic/numkit/linalg.hpp"
#include "pcic/numkit/reductions.hpp"
#include "pcic/numkit/rng.hpp"
#include "pcic/sampler.hpp"

namespace pcic::experiments {

/// Stream for one (purpose, replication) pair under `seed`. Purposes keep
/// data generation, posterior sampling and oracles on separate streams.
inline RngStream purpose_stream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t replication) {
  return substream(mix_seed(seed, purpose), replication);
}

enum StreamPurpose : std::uint64_t { data_stream = 0, draw_stream = 1, oracle_stream = 2 };

struct OracleEstimate {
  double mean = 0.0;
  double se = 0.0;
};

/// Monte Carlo G_n. For each of `replicates` fresh datasets X~ produced by
/// `generate(n, rng)`, evaluates -(1/n) sum_i w_i log mean_s h_i(X~_i | theta_s)
/// and returns the mean over replicates with its standard error.
template <models::ModelSpec M, class Generator>
OracleEstimate oracle_generalization_error(const M& model, std::size_t n, const Draws& draws,
                                           std::size_t replicates, Generator&& generate, RngStream& rng) {
  if (replicates == 0) throw ArgumentError("oracle_generalization_error: need at least one replicate");
  if (draws.count() == 0) throw ArgumentError("oracle_generalization_error: no draws");
  std::vector<Vector> thetas;
  thetas.reserve(draws.count());
  for (std::size_t s = 0; s < draws.count(); ++s) thetas.push_back(draws.draw(s));

  std::vector<double> values(replicates);
  std::vector<double> buffer(draws.count());
  for (std::size_t r = 0; r < replicates; ++r) {
    const auto fresh = generate(n, rng);
    double acc = 0.0;
    for (const auto& datum : fresh) {
      const double w = model.weight(datum);
      if (w == 0.0) continue;
      for (std::size_t s = 0; s < thetas.size(); ++s) buffer[s] = model.log_pred(datum, thetas[s]);
      acc -= w * log_mean_exp(buffer);
    }
    values[r] = acc / static_cast<double>(fresh.size());
  }
  const MeanSe ms = mean_and_se(values);
  return {ms.mean, replicates > 1 ? ms.se : 0.0};
}

/// Expected negative log density of y ~ N(truth_mean, noise_var) under the
/// Gaussian predictive N(pred_mean, pred_var), integrated over y exactly.
inline double expected_gaussian_nll(double truth_mean, double noise_var, double pred_mean, double pred_var) {
  constexpr double kLog2Pi = 1.83787706640934548356;
  const double diff = truth_mean - pred_mean;
  return 0.5 * (kLog2Pi + std::log(pred_var)) + (noise_var + diff * diff) / (2.0 * pred_var);
}

/// Negative log of the exact posterior predictive N(f^T m, sigma2 + f^T C f) at y.
inline double gaussian_predictive_nll(const Vector& features, double y, const GaussianPosterior& post, double sigma2) {
  constexpr double kLog2Pi = 1.83787706640934548356;
  const double mean = features.dot(post.mean);
  const double var = sigma2 + features.dot(post.cov * features);
  const double z = y - mean;
  return 0.5 * (kLog2Pi + std::log(var)) + z * z / (2.0 * var);
}

}  // namespace pcic::experiments
