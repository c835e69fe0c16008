#include "pcic/models/estimation.hpp"

#include <algorithm>
#include <numeric>

namespace pcic::models {

namespace {

double simplex_diameter(const std::vector<Vector>& vertices) {
  double diameter = 0.0;
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      diameter = std::max(diameter, (vertices[a] - vertices[b]).norm());
    }
  }
  return diameter;
}

}  // namespace

SimplexResult nelder_mead_minimize(const std::function<double(const Vector&)>& objective, const Vector& start,
                                   double initial_step, double diameter_tol, std::size_t max_iterations) {
  const auto d = static_cast<std::size_t>(start.size());
  std::vector<Vector> vertices(d + 1, start);
  std::vector<double> values(d + 1);
  for (std::size_t j = 0; j < d; ++j) {
    vertices[j + 1](static_cast<Eigen::Index>(j)) += initial_step * std::max(1.0, std::abs(start(static_cast<Eigen::Index>(j))));
  }
  for (std::size_t k = 0; k <= d; ++k) values[k] = objective(vertices[k]);

  std::vector<std::size_t> order(d + 1);
  SimplexResult out;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    {
      std::vector<Vector> v2(d + 1);
      std::vector<double> f2(d + 1);
      for (std::size_t k = 0; k <= d; ++k) {
        v2[k] = vertices[order[k]];
        f2[k] = values[order[k]];
      }
      vertices.swap(v2);
      values.swap(f2);
    }
    out.iterations = it;
    if (simplex_diameter(vertices) < diameter_tol) {
      out.converged = true;
      break;
    }

    Vector centroid = Vector::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) centroid += vertices[k];
    centroid /= static_cast<double>(d);

    const Vector& worst = vertices[d];
    const Vector reflected = centroid + (centroid - worst);
    const double f_reflected = objective(reflected);
    if (f_reflected < values[0]) {
      const Vector expanded = centroid + 2.0 * (centroid - worst);
      const double f_expanded = objective(expanded);
      if (f_expanded < f_reflected) {
        vertices[d] = expanded;
        values[d] = f_expanded;
      } else {
        vertices[d] = reflected;
        values[d] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[d - 1]) {
      vertices[d] = reflected;
      values[d] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[d];
    const Vector contracted = outside ? Vector(centroid + 0.5 * (reflected - centroid))
                                      : Vector(centroid + 0.5 * (worst - centroid));
    const double f_contracted = objective(contracted);
    if (f_contracted < (outside ? f_reflected : values[d])) {
      vertices[d] = contracted;
      values[d] = f_contracted;
      continue;
    }
    for (std::size_t k = 1; k <= d; ++k) {
      vertices[k] = vertices[0] + 0.5 * (vertices[k] - vertices[0]);
      values[k] = objective(vertices[k]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  out.point = vertices[best];
  out.value = values[best];
  return out;
}

double theoretical_penalty(const InfoMatrices& info, std::size_t n) {
  if (n == 0) throw ArgumentError("theoretical_penalty: n must be positive");
  const Matrix j_s_inv = guarded_inverse(info.j_s);
  const Matrix jh_jsinv = info.j_h * j_s_inv;
  const double t1 = (jh_jsinv * info.i_s * j_s_inv).trace();
  const double t2 = jh_jsinv.trace();
  const double t3 = (info.i_h * j_s_inv).trace();
  return (t1 + t2 - t3) / (2.0 * static_cast<double>(n));
}

}  // namespace pcic::models
