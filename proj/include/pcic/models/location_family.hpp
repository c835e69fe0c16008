#pragma once

#include <span>
#include <string>
#include <string_view>

#include "pcic/models/model_spec.hpp"

namespace pcic::models {

enum class LocationFamily { normal, laplace, cauchy };

std::string_view family_name(LocationFamily family);
/// Inverse of family_name; throws ArgumentError on an unknown name.
LocationFamily parse_family(std::string_view name);

/// Unit-scale log density of `family` at y - location.
double location_log_density(LocationFamily family, double y, double location);

/// Location model trained on the unit-scale Laplace score
///   s(y, theta) = -log 2 - |y - theta|
/// and evaluated with a unit-scale normal, Laplace or Cauchy predictive
/// density. The score is shared by every candidate family.
///
/// The Laplace score (and the Laplace predictive) has a kink at y = theta,
/// so its second derivative is a point mass. The analytic Hessian replaces
/// that mass by -2 K_b(y - theta) with K_b the triangular kernel of
/// half-width `kink_bandwidth`, which makes the empirical curvature a
/// kernel estimate of -2 p(theta).
class LocationFamilyModel {
 public:
  using Datum = double;

  explicit LocationFamilyModel(LocationFamily predictive, double prior_sd = 10.0, double kink_bandwidth = 0.25);

  std::size_t dim() const { return 1; }
  LocationFamily family() const { return family_; }
  double prior_sd() const { return prior_sd_; }
  double kink_bandwidth() const { return bandwidth_; }

  double log_prior(const Vector& theta) const;
  double score(double y, const Vector& theta) const;
  double log_pred(double y, const Vector& theta) const { return location_log_density(family_, y, theta(0)); }
  double weight(double) const { return 1.0; }

  Vector score_gradient(double y, const Vector& theta) const;
  Matrix score_hessian(double y, const Vector& theta) const;
  Vector log_pred_gradient(double y, const Vector& theta) const;
  Matrix log_pred_hessian(double y, const Vector& theta) const;

  /// Maximiser of sum_i s(y_i, theta): the sample median, taking the
  /// midpoint of the optimal interval when n is even.
  Vector exact_m_estimate(const std::vector<double>& data) const;

  /// Triangular-kernel half-width sqrt(6) * 1.06 * sd * n^{-1/5}
  /// (Silverman's rule rescaled to the triangular kernel).
  static double bandwidth_for(std::span<const double> data);

 private:
  double kink_curvature(double u) const;

  LocationFamily family_;
  double prior_sd_;
  double bandwidth_;
};

}  // namespace pcic::models
