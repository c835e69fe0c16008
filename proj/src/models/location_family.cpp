#include "pcic/models/location_family.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pcic/numkit/distributions.hpp"

namespace pcic::models {

namespace {

constexpr double kLog2 = std::numbers::ln2;

double sign(double u) { return u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0); }

}  // namespace

std::string_view family_name(LocationFamily family) {
  switch (family) {
    case LocationFamily::normal: return "normal";
    case LocationFamily::laplace: return "laplace";
    case LocationFamily::cauchy: return "cauchy";
  }
  return "unknown";
}

LocationFamily parse_family(std::string_view name) {
  if (name == "normal") return LocationFamily::normal;
  if (name == "laplace") return LocationFamily::laplace;
  if (name == "cauchy") return LocationFamily::cauchy;
  throw ArgumentError("unknown location family '" + std::string(name) + "'");
}

double location_log_density(LocationFamily family, double y, double location) {
  const double u = y - location;
  switch (family) {
    case LocationFamily::normal: return -0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * u * u;
    case LocationFamily::laplace: return -kLog2 - std::abs(u);
    case LocationFamily::cauchy: return -std::log(std::numbers::pi) - std::log1p(u * u);
  }
  return 0.0;
}

LocationFamilyModel::LocationFamilyModel(LocationFamily predictive, double prior_sd, double kink_bandwidth)
    : family_(predictive), prior_sd_(prior_sd), bandwidth_(kink_bandwidth) {
  if (!(prior_sd > 0.0)) throw ParameterError("prior sd must be positive");
  if (!(kink_bandwidth > 0.0)) throw ParameterError("kink bandwidth must be positive");
}

double LocationFamilyModel::log_prior(const Vector& theta) const { return normal_log_pdf(theta(0), 0.0, prior_sd_); }

double LocationFamilyModel::score(double y, const Vector& theta) const { return -kLog2 - std::abs(y - theta(0)); }

double LocationFamilyModel::kink_curvature(double u) const {
  const double a = std::abs(u);
  if (a >= bandwidth_) return 0.0;
  return -2.0 * (1.0 - a / bandwidth_) / bandwidth_;
}

Vector LocationFamilyModel::score_gradient(double y, const Vector& theta) const {
  return Vector::Constant(1, sign(y - theta(0)));
}

Matrix LocationFamilyModel::score_hessian(double y, const Vector& theta) const {
  return Matrix::Constant(1, 1, kink_curvature(y - theta(0)));
}

Vector LocationFamilyModel::log_pred_gradient(double y, const Vector& theta) const {
  const double u = y - theta(0);
  switch (family_) {
    case LocationFamily::normal: return Vector::Constant(1, u);
    case LocationFamily::laplace: return Vector::Constant(1, sign(u));
    case LocationFamily::cauchy: return Vector::Constant(1, 2.0 * u / (1.0 + u * u));
  }
  return Vector::Zero(1);
}

Matrix LocationFamilyModel::log_pred_hessian(double y, const Vector& theta) const {
  const double u = y - theta(0);
  switch (family_) {
    case LocationFamily::normal: return Matrix::Constant(1, 1, -1.0);
    case LocationFamily::laplace: return Matrix::Constant(1, 1, kink_curvature(u));
    case LocationFamily::cauchy: {
      const double q = 1.0 + u * u;
      return Matrix::Constant(1, 1, 2.0 * (u * u - 1.0) / (q * q));
    }
  }
  return Matrix::Zero(1, 1);
}

Vector LocationFamilyModel::exact_m_estimate(const std::vector<double>& data) const {
  if (data.empty()) throw ArgumentError("m-estimate: empty dataset");
  std::vector<double> sorted(data);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return Vector::Constant(1, median);
}

double LocationFamilyModel::bandwidth_for(std::span<const double> data) {
  if (data.size() < 2) throw ArgumentError("bandwidth_for: need at least two observations");
  double mean = 0.0;
  for (double v : data) mean += v;
  mean /= static_cast<double>(data.size());
  double ss = 0.0;
  for (double v : data) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(data.size() - 1));
  return std::sqrt(6.0) * 1.06 * sd * std::pow(static_cast<double>(data.size()), -0.2);
}

}  // namespace pcic::models
