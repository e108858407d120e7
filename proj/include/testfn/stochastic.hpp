// Stochastic test functions with noise frozen per instance.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "testfn/core.hpp"

namespace testfn {

/// Frozen uniform draws for one stochastic instance.
///
/// grid_eps holds eps_ij for i, j = 1..K in row-major order (i outer);
/// vec_eps holds eps_i for i = 1..n. Draw order is grid first, then vector,
/// all from the noise stream of `seed`.
struct NoiseRealization {
  std::uint64_t seed = 0;
  int K = 0;
  std::size_t n = 0;
  std::vector<double> grid_eps;
  std::vector<double> vec_eps;

  double grid(int i, int j) const {
    return grid_eps[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(K) + static_cast<std::size_t>(j - 1)];
  }

  friend bool operator==(const NoiseRealization&, const NoiseRealization&) = default;
};

inline NoiseRealization realize_noise(std::uint64_t seed, int K, std::size_t n) {
  if (K < 1) throw Error(Errc::invalid_argument, "noise grid size K must be >= 1");
  if (n < 1) throw Error(Errc::invalid_argument, "noise vector length must be >= 1");
  NoiseRealization noise{seed, K, n, {}, {}};
  Rng rng(seed, kNoiseStream);
  noise.grid_eps.resize(static_cast<std::size_t>(K) * static_cast<std::size_t>(K));
  for (auto& e : noise.grid_eps) e = rng.uniform();
  noise.vec_eps.resize(n);
  for (auto& e : noise.vec_eps) e = rng.uniform();
  return noise;
}

/// Every draw replaced by `value`. Used by tests to pin the random terms.
inline NoiseRealization constant_noise(int K, std::size_t n, double value) {
  NoiseRealization noise{0, K, n, {}, {}};
  noise.grid_eps.assign(static_cast<std::size_t>(K) * static_cast<std::size_t>(K), value);
  noise.vec_eps.assign(n, value);
  return noise;
}

/// -5 exp(-beta |x - (pi,pi)|^2) - sum_{i,j=1..K} eps_ij exp(-alpha |x - (i,j)|^2)
inline double eval_stochastic_grid(PointView x, const NoiseRealization& noise, double alpha = 1.0,
                                   double beta = 1.0, int K = 10) {
  detail::require_dim(x, 2);
  if (noise.K != K) throw Error(Errc::invalid_argument, "noise realization was drawn for a different K");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw Error(Errc::invalid_argument, "alpha and beta must be > 0");
  const double pi = std::numbers::pi;
  double f = -5.0 * std::exp(-beta * ((x[0] - pi) * (x[0] - pi) + (x[1] - pi) * (x[1] - pi)));
  for (int i = 1; i <= K; ++i) {
    const double dx = x[0] - i;
    for (int j = 1; j <= K; ++j) {
      const double dy = x[1] - j;
      f -= noise.grid(i, j) * std::exp(-alpha * (dx * dx + dy * dy));
    }
  }
  return f;
}

/// sum eps_i |x_i - 1/i|; zero at (1, 1/2, ..., 1/n) for every realization.
inline double eval_stochastic_singular(PointView x, const NoiseRealization& noise) {
  detail::require_nonempty(x);
  detail::require_dim(x, noise.n);
  double f = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    f += noise.vec_eps[i] * std::abs(x[i] - 1.0 / static_cast<double>(i + 1));
  return f;
}

}  // namespace testfn
