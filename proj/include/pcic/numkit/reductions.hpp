#pragma once

#include <span>

namespace pcic {

/// log((1/S) * sum exp(v_s)), shifted by max(v) so nothing overflows.
/// Returns exactly -inf iff every value is -inf. Throws ArgumentError on
/// empty input.
double log_mean_exp(std::span<const double> values);

/// Population (divide-by-S) moments over posterior draws.
struct DrawMoments {
  double mean_f = 0.0;
  double var_f = 0.0;
  double cov_fg = 0.0;
};

/// Two-pass mean/variance/covariance. When f and g are the same sequence
/// the covariance is bit-identical to the variance.
DrawMoments moments_over_draws(std::span<const double> f, std::span<const double> g);

/// Sample mean and standard error (S-1 denominator) of a replication series.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};
MeanSe mean_and_se(std::span<const double> values);

/// Pearson correlation; 0 when either sequence is constant.
double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace pcic
