#include "pcic/numkit/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pcic/numkit/errors.hpp"

namespace pcic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_scale(double scale, const char* name) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ParameterError(std::string(name) + " scale must be positive and finite, got " +
                         std::to_string(scale));
  }
}

}  // namespace

void validate(const Distribution& dist) {
  std::visit(overloaded{
                 [](const Normal& d) { require_scale(d.sd, "normal"); },
                 [](const Uniform& d) {
                   if (!(d.upper > d.lower) || !std::isfinite(d.lower) || !std::isfinite(d.upper)) {
                     throw ParameterError("uniform requires finite lower < upper");
                   }
                 },
                 [](const Cauchy& d) { require_scale(d.scale, "cauchy"); },
                 [](const Laplace& d) { require_scale(d.scale, "laplace"); },
             },
             dist);
}

double standard_normal(RngStream& rng) {
  const double u1 = rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample(const Distribution& dist, RngStream& rng) {
  validate(dist);
  return std::visit(
      overloaded{
          [&](const Normal& d) { return d.mean + d.sd * standard_normal(rng); },
          [&](const Uniform& d) { return d.lower + (d.upper - d.lower) * rng.uniform01(); },
          [&](const Cauchy& d) {
            return d.location + d.scale * std::tan(std::numbers::pi * (rng.uniform01() - 0.5));
          },
          [&](const Laplace& d) {
            const double u = rng.uniform01() - 0.5;
            const double sign = u < 0.0 ? -1.0 : 1.0;
            return d.location - d.scale * sign * std::log1p(-2.0 * std::abs(u));
          },
      },
      dist);
}

double log_pdf(const Distribution& dist, double x) {
  validate(dist);
  return std::visit(
      overloaded{
          [&](const Normal& d) { return normal_log_pdf(x, d.mean, d.sd); },
          [&](const Uniform& d) {
            return (x >= d.lower && x <= d.upper) ? -std::log(d.upper - d.lower)
                                                  : -std::numeric_limits<double>::infinity();
          },
          [&](const Cauchy& d) {
            const double z = (x - d.location) / d.scale;
            return -std::log(std::numbers::pi * d.scale) - std::log1p(z * z);
          },
          [&](const Laplace& d) {
            return -std::log(2.0 * d.scale) - std::abs(x - d.location) / d.scale;
          },
      },
      dist);
}

double cdf(const Distribution& dist, double x) {
  validate(dist);
  return std::visit(
      overloaded{
          [&](const Normal& d) { return 0.5 * std::erfc(-(x - d.mean) / (d.sd * std::numbers::sqrt2)); },
          [&](const Uniform& d) {
            if (x <= d.lower) return 0.0;
            if (x >= d.upper) return 1.0;
            return (x - d.lower) / (d.upper - d.lower);
          },
          [&](const Cauchy& d) { return 0.5 + std::atan((x - d.location) / d.scale) / std::numbers::pi; },
          [&](const Laplace& d) {
            const double z = (x - d.location) / d.scale;
            return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
          },
      },
      dist);
}

}  // namespace pcic
