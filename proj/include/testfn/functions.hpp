// Deterministic objective functions and closed-form gradients.
//
// Every evaluator takes a point view and returns a double. Coordinates are
// indexed from 1 in the formulas (weights i, exponents i+1, ...), so loops use
// `i + 1` where the weight matters.
#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "testfn/core.hpp"

namespace testfn {

namespace detail {

inline double sq(double v) { return v * v; }

/// prod_{j != i} values[j] for every i, without division.
inline std::vector<double> products_excluding(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<double> out(n, 1.0);
  double prefix = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = prefix;
    prefix *= values[i];
  }
  double suffix = 1.0;
  for (std::size_t i = n; i-- > 0;) {
    out[i] *= suffix;
    suffix *= values[i];
  }
  return out;
}

inline double ipow(double base, int exponent) {
  double result = 1.0;
  for (int k = 0; k < exponent; ++k) result *= base;
  return result;
}

}  // namespace detail

inline double eval_ackley(PointView x) {
  detail::require_nonempty(x);
  const double n = static_cast<double>(x.size());
  double sum_sq = 0.0, sum_cos = 0.0;
  for (double xi : x) {
    sum_sq += xi * xi;
    sum_cos += std::cos(2.0 * std::numbers::pi * xi);
  }
  // grouped so both pairs cancel exactly at the origin
  return 20.0 * (1.0 - std::exp(-0.2 * std::sqrt(sum_sq / n))) + (std::numbers::e - std::exp(sum_cos / n));
}

inline double eval_sphere(PointView x) {
  detail::require_nonempty(x);
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return s;
}

inline double eval_hyper_ellipsoid(PointView x) {
  detail::require_nonempty(x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<double>(i + 1) * x[i] * x[i];
  return s;
}

inline double eval_sum_powers(PointView x) {
  detail::require_nonempty(x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += detail::ipow(std::abs(x[i]), static_cast<int>(i) + 2);
  return s;
}

/// The exponent is read as -((x-pi)^2 + (y-pi)^2), which keeps the function
/// bounded with its minimum -1 at (pi, pi).
inline double eval_easom_2d(PointView x) {
  detail::require_dim(x, 2);
  const double pi = std::numbers::pi;
  return -std::cos(x[0]) * std::cos(x[1]) * std::exp(-(detail::sq(x[0] - pi) + detail::sq(x[1] - pi)));
}

/// n-dimensional Easom. The default drops the (-1)^n factor so that the
/// minimum is -1 at (pi, ..., pi) in every dimension; `literal_sign` restores it.
inline double eval_easom_nd(PointView x, bool literal_sign = false) {
  detail::require_nonempty(x);
  const double pi = std::numbers::pi;
  double prod = 1.0, dist = 0.0;
  for (double xi : x) {
    prod *= detail::sq(std::cos(xi));
    dist += detail::sq(xi - pi);
  }
  const double sign = (literal_sign && x.size() % 2 == 1) ? -1.0 : 1.0;
  return -sign * prod * std::exp(-dist);
}

inline double eval_griewank(PointView x) {
  detail::require_nonempty(x);
  double sum = 0.0, prod = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += x[i] * x[i];
    prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return sum / 4000.0 - prod + 1.0;
}

inline double eval_michalewicz(PointView x, int m = 10) {
  detail::require_nonempty(x);
  if (m < 1) throw Error(Errc::invalid_argument, "michalewicz m must be >= 1");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double inner = std::sin(static_cast<double>(i + 1) * x[i] * x[i] / std::numbers::pi);
    s += std::sin(x[i]) * detail::ipow(inner, 2 * m);
  }
  return -s;
}

namespace detail {

/// r_j = sum_i (i^j + beta) * ((x_i / i)^j - 1), j = 1..n
inline std::vector<double> perm1_residuals(PointView x, double beta) {
  const std::size_t n = x.size();
  std::vector<double> r(n, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      const double di = static_cast<double>(i);
      acc += (std::pow(di, static_cast<double>(j)) + beta) *
             (ipow(x[i - 1] / di, static_cast<int>(j)) - 1.0);
    }
    r[j - 1] = acc;
  }
  return r;
}

/// r_j = sum_i (i + beta) * (x_i^j - (1/i)^j), j = 1..n
inline std::vector<double> perm2_residuals(PointView x, double beta) {
  const std::size_t n = x.size();
  std::vector<double> r(n, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      const double di = static_cast<double>(i);
      acc += (di + beta) * (ipow(x[i - 1], static_cast<int>(j)) - ipow(1.0 / di, static_cast<int>(j)));
    }
    r[j - 1] = acc;
  }
  return r;
}

inline void require_positive_beta(double beta) {
  if (!(beta > 0.0)) throw Error(Errc::invalid_argument, "beta must be > 0");
}

}  // namespace detail

/// First Perm function, summed as squares of the inner residuals. `literal`
/// sums the residuals without squaring.
inline double eval_perm1(PointView x, double beta, bool literal = false) {
  detail::require_nonempty(x);
  detail::require_positive_beta(beta);
  double s = 0.0;
  for (double r : detail::perm1_residuals(x, beta)) s += literal ? r : r * r;
  return s;
}

inline double eval_perm2(PointView x, double beta) {
  detail::require_nonempty(x);
  detail::require_positive_beta(beta);
  double s = 0.0;
  for (double r : detail::perm2_residuals(x, beta)) s += r * r;
  return s;
}

inline double eval_rastrigin(PointView x) {
  detail::require_nonempty(x);
  double s = 10.0 * static_cast<double>(x.size());
  for (double xi : x) s += xi * xi - 10.0 * std::cos(2.0 * std::numbers::pi * xi);
  return s;
}

inline double eval_rosenbrock(PointView x) {
  if (x.size() < 2) throw Error(Errc::dimension_mismatch, "rosenbrock needs n >= 2");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    s += detail::sq(x[i] - 1.0) + 100.0 * detail::sq(x[i + 1] - x[i] * x[i]);
  return s;
}

inline double eval_schwefel(PointView x) {
  detail::require_nonempty(x);
  double s = 0.0;
  for (double xi : x) s += xi * std::sin(std::sqrt(std::abs(xi)));
  return -s;
}

inline double eval_six_hump(PointView x) {
  detail::require_dim(x, 2);
  const double a = x[0], b = x[1];
  const double a2 = a * a, b2 = b * b;
  return (4.0 - 2.1 * a2 + a2 * a2 / 3.0) * a2 + a * b + 4.0 * (b2 - 1.0) * b2;
}

namespace detail {

inline constexpr int kShubertOrder = 5;

inline double shubert_factor(double t) {
  double s = 0.0;
  for (int i = 1; i <= kShubertOrder; ++i) s += i * std::cos(i + (i + 1) * t);
  return s;
}

inline double shubert_factor_derivative(double t) {
  double s = 0.0;
  for (int i = 1; i <= kShubertOrder; ++i) s -= i * (i + 1) * std::sin(i + (i + 1) * t);
  return s;
}

}  // namespace detail

/// Two-dimensional Shubert with series order 5.
inline double eval_shubert(PointView x) {
  detail::require_dim(x, 2);
  return detail::shubert_factor(x[0]) * detail::shubert_factor(x[1]);
}

inline double eval_yang_modulus(PointView x) {
  detail::require_nonempty(x);
  double abs_sum = 0.0, sin_sum = 0.0;
  for (double xi : x) {
    abs_sum += std::abs(xi);
    sin_sum += std::sin(xi * xi);
  }
  return abs_sum * std::exp(-sin_sum);
}

inline double eval_yang_multi(PointView x) {
  detail::require_nonempty(x);
  double abs_sum = 0.0, sq_sum = 0.0;
  for (double xi : x) {
    abs_sum += std::abs(xi);
    sq_sum += xi * xi;
  }
  return -abs_sum * std::exp(-sq_sum);
}

/// Standing wave with a single deep defect at `centre` * (1, ..., 1).
inline double eval_standing_wave(PointView x, double beta = 15.0, int m = 5, Shift shift = Shift::origin) {
  detail::require_nonempty(x);
  detail::require_positive_beta(beta);
  if (m < 1) throw Error(Errc::invalid_argument, "standing wave m must be >= 1");
  const double c = shift_value(shift);
  double envelope = 0.0, well = 0.0, prod = 1.0;
  for (double xi : x) {
    envelope += detail::ipow(xi / beta, 2 * m);
    well += detail::sq(xi - c);
    prod *= detail::sq(std::cos(xi));
  }
  return (std::exp(-envelope) - 2.0 * std::exp(-well)) * prod;
}

inline double eval_candlestick(PointView x) {
  detail::require_nonempty(x);
  double sin_sq = 0.0, sq_sum = 0.0, root_term = 0.0;
  for (double xi : x) {
    sin_sq += detail::sq(std::sin(xi));
    sq_sum += xi * xi;
    root_term += detail::sq(std::sin(std::sqrt(std::abs(xi))));
  }
  return (sin_sq - std::exp(-sq_sum)) * std::exp(-root_term);
}

namespace detail {

inline double zakharov_j(PointView x) {
  double j = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) j += static_cast<double>(i + 1) * x[i];
  return 0.5 * j;
}

}  // namespace detail

inline double eval_zakharov(PointView x) {
  detail::require_nonempty(x);
  const double j = detail::zakharov_j(x);
  const double j2 = j * j;
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return s + j2 + j2 * j2;
}

inline constexpr int kZakharovMaxTerms = 20;

/// sum x_i^2 + sum_{k=1..K} J^(2k). K = 2 is the classic Zakharov function.
inline double eval_zakharov_general(PointView x, int K) {
  detail::require_nonempty(x);
  if (K < 1 || K > kZakharovMaxTerms)
    throw Error(Errc::invalid_argument, "zakharov term count K must be in [1, 20]");
  const double j2 = detail::sq(detail::zakharov_j(x));
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  double power = 1.0;
  for (int k = 1; k <= K; ++k) {
    power *= j2;
    s += power;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Gradients
// ---------------------------------------------------------------------------

namespace grad {

inline Point sphere(PointView x) {
  detail::require_nonempty(x);
  Point g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * x[i];
  return g;
}

inline Point hyper_ellipsoid(PointView x) {
  detail::require_nonempty(x);
  Point g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * static_cast<double>(i + 1) * x[i];
  return g;
}

inline Point sum_powers(PointView x) {
  detail::require_nonempty(x);
  Point g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int p = static_cast<int>(i) + 2;
    g[i] = p * detail::ipow(std::abs(x[i]), p - 1) * (x[i] < 0 ? -1.0 : 1.0);
  }
  return g;
}

/// Undefined at the origin, where the radial term has a cone-shaped kink.
inline Point ackley(PointView x) {
  detail::require_nonempty(x);
  const double n = static_cast<double>(x.size());
  double sum_sq = 0.0, sum_cos = 0.0;
  for (double xi : x) {
    sum_sq += xi * xi;
    sum_cos += std::cos(2.0 * std::numbers::pi * xi);
  }
  if (sum_sq == 0.0) throw Error(Errc::singular_point, "ackley gradient is undefined at the origin");
  const double r = std::sqrt(sum_sq / n);
  const double radial = 4.0 * std::exp(-0.2 * r) / (n * r);
  const double wave = 2.0 * std::numbers::pi / n * std::exp(sum_cos / n);
  Point g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    g[i] = radial * x[i] + wave * std::sin(2.0 * std::numbers::pi * x[i]);
  return g;
}

inline Point easom_2d(PointView x) {
  detail::require_dim(x, 2);
  const double pi = std::numbers::pi;
  const double e = std::exp(-(detail::sq(x[0] - pi) + detail::sq(x[1] - pi)));
  const double cx = std::cos(x[0]), cy = std::cos(x[1]);
  return {std::sin(x[0]) * cy * e + 2.0 * (x[0] - pi) * cx * cy * e,
          cx * std::sin(x[1]) * e + 2.0 * (x[1] - pi) * cx * cy * e};
}

inline Point easom_nd(PointView x, bool literal_sign = false) {
  detail::require_nonempty(x);
  const double pi = std::numbers::pi;
  std::vector<double> c2(x.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    c2[i] = detail::sq(std::cos(x[i]));
    dist += detail::sq(x[i] - pi);
  }
  const double e = std::exp(-dist);
  const double sign = (literal_sign && x.size() % 2 == 1) ? -1.0 : 1.0;
  const auto others = detail::products_excluding(c2);
  Point g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    // f = -sign * P * e
    const double dp = -2.0 * std::sin(x[i]) * std::cos(x[i]) * others[i];
    const double p = c2[i] * others[i];
    g[i] = -sign * (dp * e + p * e * (-2.0 * (x[i] - pi)));
  }
  return g;
}

inline Point griewank(PointView x) {
  detail::require_nonempty(x);
  std::vector<double> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  const auto others = detail::products_excluding(c);
  Point g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double root = std::sqrt(static_cast<double>(i + 1));
    g[i] = x[i] / 2000.0 + std::sin(x[i] / root) / root * others[i];
  }
  return g;
}

inline Point michalewicz(PointView x, int m = 10) {
  detail::require_nonempty(x);
  Point g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = static_cast<double>(i + 1) / std::numbers::pi;
    const double arg = w * x[i] * x[i];
    const double s = std::sin(arg);
    const double term = std::cos(x[i]) * detail::ipow(s, 2 * m) +
                        std::sin(x[i]) * 2.0 * m * detail::ipow(s, 2 * m - 1) * std::cos(arg) * 2.0 * w * x[i];
    g[i] = -term;
  }
  return g;
}

inline Point perm1(PointView x, double beta, bool literal = false) {
  detail::require_nonempty(x);
  detail::require_positive_beta(beta);
  const std::size_t n = x.size();
  const auto r = detail::perm1_residuals(x, beta);
  Point g(n, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const double weight = literal ? 1.0 : 2.0 * r[j - 1];
    for (std::size_t k = 1; k <= n; ++k) {
      const double dk = static_cast<double>(k);
      const double kj = std::pow(dk, static_cast<double>(j));
      // d/dx_k (x_k/k)^j = j x_k^(j-1) / k^j
      const double dr = (kj + beta) * static_cast<double>(j) *
                        detail::ipow(x[k - 1], static_cast<int>(j) - 1) / kj;
      g[k - 1] += weight * dr;
    }
  }
  return g;
}

inline Point perm2(PointView x, double beta) {
  detail::require_nonempty(x);
  detail::require_positive_beta(beta);
  const std::size_t n = x.size();
  const auto r = detail::perm2_residuals(x, beta);
  Point g(n, 0.0);
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= n; ++k)
      g[k - 1] += 2.0 * r[j - 1] * (static_cast<double>(k) + beta) * static_cast<double>(j) *
                  detail::ipow(x[k - 1], static_cast<int>(j) - 1);
  return g;
}

inline Point rastrigin(PointView x) {
  detail::require_nonempty(x);
  Point g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    g[i] = 2.0 * x[i] + 20.0 * std::numbers::pi * std::sin(2.0 * std::numbers::pi * x[i]);
  return g;
}

inline Point rosenbrock(PointView x) {
  if (x.size() < 2) throw Error(Errc::dimension_mismatch, "rosenbrock needs n >= 2");
  Point g(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double t = x[i + 1] - x[i] * x[i];
    g[i] += 2.0 * (x[i] - 1.0) - 400.0 * x[i] * t;
    g[i + 1] += 200.0 * t;
  }
  return g;
}

inline Point six_hump(PointView x) {
  detail::require_dim(x, 2);
  const double a = x[0], b = x[1];
  return {8.0 * a - 8.4 * a * a * a + 2.0 * a * a * a * a * a + b, a - 8.0 * b + 16.0 * b * b * b};
}

inline Point shubert(PointView x) {
  detail::require_dim(x, 2);
  return {detail::shubert_factor_derivative(x[0]) * detail::shubert_factor(x[1]),
          detail::shubert_factor(x[0]) * detail::shubert_factor_derivative(x[1])};
}

inline Point standing_wave(PointView x, double beta = 15.0, int m = 5, Shift shift = Shift::origin) {
  detail::require_nonempty(x);
  detail::require_positive_beta(beta);
  const double c = shift_value(shift);
  double envelope = 0.0, well = 0.0;
  std::vector<double> c2(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    envelope += detail::ipow(x[i] / beta, 2 * m);
    well += detail::sq(x[i] - c);
    c2[i] = detail::sq(std::cos(x[i]));
  }
  const double e_env = std::exp(-envelope), e_well = std::exp(-well);
  const double bracket = e_env - 2.0 * e_well;
  const auto others = detail::products_excluding(c2);
  Point g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d_env = 2.0 * m * detail::ipow(x[i] / beta, 2 * m - 1) / beta;
    const double d_bracket = -e_env * d_env + 4.0 * (x[i] - c) * e_well;
    const double d_prod = -2.0 * std::sin(x[i]) * std::cos(x[i]) * others[i];
    g[i] = d_bracket * c2[i] * others[i] + bracket * d_prod;
  }
  return g;
}

inline Point zakharov_general(PointView x, int K) {
  detail::require_nonempty(x);
  if (K < 1 || K > kZakharovMaxTerms)
    throw Error(Errc::invalid_argument, "zakharov term count K must be in [1, 20]");
  const double j = detail::zakharov_j(x);
  // d/dJ sum_k J^(2k) = sum_k 2k J^(2k-1)
  double dj = 0.0, power = j;  // J^(2k-1)
  for (int k = 1; k <= K; ++k) {
    dj += 2.0 * k * power;
    power *= j * j;
  }
  Point g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * x[i] + dj * 0.5 * static_cast<double>(i + 1);
  return g;
}

inline Point zakharov(PointView x) { return zakharov_general(x, 2); }

}  // namespace grad

}  // namespace testfn
