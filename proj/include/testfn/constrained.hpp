// Product objective on the unit hyper-sphere, with penalty and projection
// handling for unconstrained optimizers.
#pragma once

#include <cmath>

#include "testfn/core.hpp"

namespace testfn {

struct SphereConstraint {
  double radius = 1.0;
  double tolerance = 1e-12;
};

/// -(sqrt n)^n * prod x_i. The constraint is not applied here.
inline double eval_product_sphere(PointView x) {
  detail::require_nonempty(x);
  const double n = static_cast<double>(x.size());
  double prod = 1.0;
  for (double xi : x) prod *= xi;
  return -std::pow(std::sqrt(n), n) * prod;
}

/// Signed residual sum x_i^2 - 1.
inline double constraint_violation(PointView x) {
  detail::require_nonempty(x);
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return s - 1.0;
}

inline double penalized_objective(PointView x, double lambda) {
  if (!(lambda > 0.0)) throw Error(Errc::invalid_argument, "penalty lambda must be > 0");
  const double v = constraint_violation(x);
  return eval_product_sphere(x) + lambda * v * v;
}

inline Point project_to_sphere(PointView x) {
  detail::require_nonempty(x);
  // hypot-style scaling avoids overflow for large coordinates
  double scale = 0.0;
  for (double xi : x) scale = std::max(scale, std::abs(xi));
  if (scale == 0.0) throw Error(Errc::zero_vector, "cannot project the zero vector onto the sphere");
  double s = 0.0;
  for (double xi : x) s += (xi / scale) * (xi / scale);
  const double norm = scale * std::sqrt(s);
  Point out(x.begin(), x.end());
  for (double& xi : out) xi /= norm;
  return out;
}

}  // namespace testfn
