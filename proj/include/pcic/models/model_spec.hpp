#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <vector>

#include "pcic/criteria.hpp"
#include "pcic/numkit/errors.hpp"
#include "pcic/numkit/linalg.hpp"
#include "pcic/sampler.hpp"

namespace pcic::models {

/// A quasi-Bayesian model: prior, per-datum training score s_i, per-datum
/// predictive log density log h_i and per-datum weight w_i. Weights depend
/// on the datum only, never on theta.
template <class M>
concept ModelSpec = requires(const M& m, const typename M::Datum& x, const Vector& theta) {
  typename M::Datum;
  { m.dim() } -> std::convertible_to<std::size_t>;
  { m.log_prior(theta) } -> std::convertible_to<double>;
  { m.score(x, theta) } -> std::convertible_to<double>;
  { m.log_pred(x, theta) } -> std::convertible_to<double>;
  { m.weight(x) } -> std::convertible_to<double>;
};

/// Models that supply exact first and second derivatives in theta.
template <class M>
concept HasAnalyticDerivatives = ModelSpec<M> && requires(const M& m, const typename M::Datum& x,
                                                          const Vector& theta) {
  { m.score_gradient(x, theta) } -> std::convertible_to<Vector>;
  { m.score_hessian(x, theta) } -> std::convertible_to<Matrix>;
  { m.log_pred_gradient(x, theta) } -> std::convertible_to<Vector>;
  { m.log_pred_hessian(x, theta) } -> std::convertible_to<Matrix>;
};

/// Models whose variance-type penalty carries its own weight (IPW squares).
template <class M>
concept HasVarianceWeight = ModelSpec<M> && requires(const M& m, const typename M::Datum& x) {
  { m.variance_weight(x) } -> std::convertible_to<double>;
};

template <ModelSpec M>
using Dataset = std::vector<typename M::Datum>;

/// Fills an EvalBundle column by column, one column per draw.
template <ModelSpec M>
EvalBundle eval_bundle(const M& model, const std::vector<typename M::Datum>& data, const Draws& draws) {
  if (data.empty()) throw ArgumentError("eval_bundle: empty dataset");
  if (draws.dim() != model.dim()) {
    throw ArgumentError("eval_bundle: draws have dimension " + std::to_string(draws.dim()) + ", model expects " +
                        std::to_string(model.dim()));
  }
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto count = static_cast<Eigen::Index>(draws.count());
  EvalBundle bundle;
  bundle.log_pred.resize(n, count);
  bundle.score.resize(n, count);
  for (Eigen::Index s = 0; s < count; ++s) {
    const Vector theta = draws.samples.row(s).transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& datum = data[static_cast<std::size_t>(i)];
      const double lp = model.log_pred(datum, theta);
      const double sc = model.score(datum, theta);
      if (std::isnan(lp) || std::isnan(sc)) {
        throw DataError("eval_bundle: model evaluation is NaN at observation " + std::to_string(i) + ", draw " +
                        std::to_string(s));
      }
      bundle.log_pred(i, s) = lp;
      bundle.score(i, s) = sc;
    }
  }
  bundle.weights.reserve(data.size());
  for (const auto& datum : data) bundle.weights.push_back(model.weight(datum));
  if constexpr (HasVarianceWeight<M>) {
    std::vector<double> vw;
    vw.reserve(data.size());
    for (const auto& datum : data) vw.push_back(model.variance_weight(datum));
    bundle.variance_weights = std::move(vw);
  }
  return bundle;
}

/// theta -> sum_i s_i(X_i, theta) + log prior(theta).
template <ModelSpec M>
double log_quasi_posterior(const M& model, const std::vector<typename M::Datum>& data, const Vector& theta) {
  double acc = model.log_prior(theta);
  for (const auto& datum : data) acc += model.score(datum, theta);
  return acc;
}

}  // namespace pcic::models
