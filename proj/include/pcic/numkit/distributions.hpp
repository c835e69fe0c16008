#pragma once

#include <cmath>
#include <variant>

#include "pcic/numkit/rng.hpp"

namespace pcic {

struct Normal {
  double mean = 0.0;
  double sd = 1.0;
};

struct Uniform {
  double lower = 0.0;
  double upper = 1.0;
};

struct Cauchy {
  double location = 0.0;
  double scale = 1.0;
};

struct Laplace {
  double location = 0.0;
  double scale = 1.0;
};

using Distribution = std::variant<Normal, Uniform, Cauchy, Laplace>;

/// Throws ParameterError unless the scale (or interval) is valid.
void validate(const Distribution& dist);

/// One variate. Normal uses Box-Muller (cosine branch only, so each call
/// consumes exactly two uniforms), Cauchy uses tan of a uniform angle and
/// Laplace the inverse CDF.
double sample(const Distribution& dist, RngStream& rng);

double log_pdf(const Distribution& dist, double x);
double cdf(const Distribution& dist, double x);

/// Standard normal variate; same construction as sample(Normal{}).
double standard_normal(RngStream& rng);

inline double normal_log_pdf(double x, double mean, double sd) {
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  const double z = (x - mean) / sd;
  return -kHalfLog2Pi - std::log(sd) - 0.5 * z * z;
}

}  // namespace pcic
