#include "pcic/numkit/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcic/numkit/errors.hpp"

namespace pcic {

double log_mean_exp(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("log_mean_exp: empty input");
  const double shift = *std::max_element(values.begin(), values.end());
  if (shift == -std::numeric_limits<double>::infinity()) return shift;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - shift);
  return shift + std::log(acc / static_cast<double>(values.size()));
}

DrawMoments moments_over_draws(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) throw ArgumentError("moments_over_draws: length mismatch");
  if (f.empty()) throw ArgumentError("moments_over_draws: empty input");
  const double count = static_cast<double>(f.size());
  double sum_f = 0.0;
  double sum_g = 0.0;
  for (std::size_t s = 0; s < f.size(); ++s) {
    sum_f += f[s];
    sum_g += g[s];
  }
  const double mean_f = sum_f / count;
  const double mean_g = sum_g / count;
  double ss_f = 0.0;
  double ss_fg = 0.0;
  for (std::size_t s = 0; s < f.size(); ++s) {
    const double df = f[s] - mean_f;
    ss_f += df * df;
    ss_fg += df * (g[s] - mean_g);
  }
  return {mean_f, ss_f / count, ss_fg / count};
}

MeanSe mean_and_se(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("mean_and_se: empty input");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double n = static_cast<double>(values.size());
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw ArgumentError("pearson: length mismatch or empty");
  const auto m = moments_over_draws(a, b);
  const auto vb = moments_over_draws(b, b).var_f;
  if (m.var_f <= 0.0 || vb <= 0.0) return 0.0;
  return m.cov_fg / std::sqrt(m.var_f * vb);
}

}  // namespace pcic
