// Function registry: metadata for every built-in test function and the
// Objective type that binds a function to a dimension, parameters and noise.
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "testfn/constrained.hpp"
#include "testfn/core.hpp"
#include "testfn/functions.hpp"
#include "testfn/stochastic.hpp"

namespace testfn {

/// Where a smooth function still lacks a derivative.
enum class Singularity { none, origin, zero_coordinate };

struct FunctionSpec {
  using BoundsRule = std::function<Bounds(std::size_t n, const Params&)>;
  using OptimaRule = std::function<std::vector<KnownOptimum>(std::size_t n, const Params&)>;
  using Evaluator = std::function<double(PointView, const Params&, const NoiseRealization*)>;
  using Gradient = std::function<Point(PointView, const Params&)>;

  std::string id;
  std::string title;
  Dimensionality dims;
  BoundsRule bounds;
  Params params;
  std::vector<std::string> param_keys;
  bool smooth = true;
  bool has_analytic_gradient = false;
  bool stochastic = false;
  bool constrained = false;
  Singularity singularity = Singularity::none;
  std::string optimum_summary;
  OptimaRule optima;
  Evaluator evaluate;
  Gradient gradient;  // empty unless has_analytic_gradient

  bool uses_param(std::string_view key) const {
    return std::find(param_keys.begin(), param_keys.end(), key) != param_keys.end();
  }
};

namespace detail {

inline FunctionSpec::BoundsRule constant_bounds(double lo, double hi) {
  return [lo, hi](std::size_t, const Params&) { return Bounds::uniform(lo, hi); };
}

inline KnownOptimum exact_optimum(Point point, double value, double tol = 1e-9,
                                  OptimumKind kind = OptimumKind::unique) {
  KnownOptimum opt;
  opt.point = std::move(point);
  opt.value = value;
  opt.value_tolerance = tol;
  opt.kind = kind;
  opt.precision = PointPrecision::exact;
  opt.provenance = "literature";
  return opt;
}

inline KnownOptimum approx_optimum(Point point, double value, double value_tol, double point_tol,
                                   OptimumKind kind = OptimumKind::unique) {
  KnownOptimum opt = exact_optimum(std::move(point), value, value_tol, kind);
  opt.precision = PointPrecision::approximate;
  opt.point_tolerance = point_tol;
  return opt;
}

inline FunctionSpec::OptimaRule zero_at_origin() {
  return [](std::size_t n, const Params&) {
    return std::vector<KnownOptimum>{exact_optimum(Point(n, 0.0), 0.0)};
  };
}

template <typename F>
FunctionSpec::Evaluator plain(F f) {
  return [f](PointView x, const Params&, const NoiseRealization*) { return f(x); };
}

template <typename G>
FunctionSpec::Gradient plain_gradient(G g) {
  return [g](PointView x, const Params&) { return g(x); };
}

inline const NoiseRealization& require_noise(const NoiseRealization* noise) {
  if (noise == nullptr) throw Error(Errc::invalid_argument, "stochastic function needs a noise realization");
  return *noise;
}

inline std::vector<FunctionSpec> builtin_specs() {
  const double pi = std::numbers::pi;
  std::vector<FunctionSpec> specs;

  auto base = [](std::string id, std::string title, Dimensionality dims, FunctionSpec::BoundsRule bounds) {
    FunctionSpec s;
    s.id = std::move(id);
    s.title = std::move(title);
    s.dims = dims;
    s.bounds = std::move(bounds);
    return s;
  };

  {
    auto s = base("ackley", "Ackley", Dimensionality::scalable(1), constant_bounds(-32.768, 32.768));
    s.has_analytic_gradient = true;
    s.singularity = Singularity::origin;
    s.optimum_summary = "f*=0 at (0,...,0)";
    s.optima = zero_at_origin();
    s.evaluate = plain(eval_ackley);
    s.gradient = plain_gradient(grad::ackley);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("sphere", "De Jong sphere", Dimensionality::scalable(1), constant_bounds(-5.12, 5.12));
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=0 at (0,...,0)";
    s.optima = zero_at_origin();
    s.evaluate = plain(eval_sphere);
    s.gradient = plain_gradient(grad::sphere);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("hyper_ellipsoid", "De Jong weighted sphere", Dimensionality::scalable(1),
                  constant_bounds(-5.12, 5.12));
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=0 at (0,...,0)";
    s.optima = zero_at_origin();
    s.evaluate = plain(eval_hyper_ellipsoid);
    s.gradient = plain_gradient(grad::hyper_ellipsoid);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("sum_powers", "Sum of different powers", Dimensionality::scalable(1), constant_bounds(-1.0, 1.0));
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=0 at (0,...,0)";
    s.optima = zero_at_origin();
    s.evaluate = plain(eval_sum_powers);
    s.gradient = plain_gradient(grad::sum_powers);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("easom_2d", "Easom", Dimensionality::fixed(2), constant_bounds(-100.0, 100.0));
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=-1 at (pi,pi)";
    s.optima = [pi](std::size_t, const Params&) {
      return std::vector<KnownOptimum>{exact_optimum({pi, pi}, -1.0, 1e-12)};
    };
    s.evaluate = plain(eval_easom_2d);
    s.gradient = plain_gradient(grad::easom_2d);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("easom_nd", "Easom, n-dimensional extension", Dimensionality::scalable(1),
                  constant_bounds(-2.0 * pi, 2.0 * pi));
    s.param_keys = {"literal_sign"};
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=-1 at (pi,...,pi)";
    s.optima = [pi](std::size_t n, const Params& p) {
      if (p.easom_literal_sign && n % 2 == 1) return std::vector<KnownOptimum>{};
      return std::vector<KnownOptimum>{exact_optimum(Point(n, pi), -1.0, 1e-12)};
    };
    s.evaluate = [](PointView x, const Params& p, const NoiseRealization*) {
      return eval_easom_nd(x, p.easom_literal_sign);
    };
    s.gradient = [](PointView x, const Params& p) { return grad::easom_nd(x, p.easom_literal_sign); };
    specs.push_back(std::move(s));
  }
  {
    auto s = base("product_sphere", "Product on the unit hyper-sphere", Dimensionality::scalable(1),
                  constant_bounds(0.0, 1.0));
    s.param_keys = {"penalty_lambda"};
    s.constrained = true;
    s.optimum_summary = "f*=-1 at (1/sqrt(n),...) subject to sum x_i^2=1";
    s.optima = [](std::size_t n, const Params&) {
      return std::vector<KnownOptimum>{
          exact_optimum(Point(n, 1.0 / std::sqrt(static_cast<double>(n))), -1.0, 1e-9)};
    };
    s.evaluate = plain(eval_product_sphere);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("griewank", "Griewank", Dimensionality::scalable(1), constant_bounds(-600.0, 600.0));
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=0 at (0,...,0)";
    s.optima = zero_at_origin();
    s.evaluate = plain(eval_griewank);
    s.gradient = plain_gradient(grad::griewank);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("michalewicz", "Michalewicz", Dimensionality::scalable(1), constant_bounds(0.0, pi));
    s.param_keys = {"m"};
    s.params.m = 10;
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=-1.8013 at (2.20319,1.57049) for n=2, m=10";
    s.optima = [](std::size_t n, const Params& p) {
      if (n != 2 || p.m != 10) return std::vector<KnownOptimum>{};
      return std::vector<KnownOptimum>{approx_optimum({2.20319, 1.57049}, -1.8013, 5e-4, 5e-4)};
    };
    s.evaluate = [](PointView x, const Params& p, const NoiseRealization*) { return eval_michalewicz(x, p.m); };
    s.gradient = [](PointView x, const Params& p) { return grad::michalewicz(x, p.m); };
    specs.push_back(std::move(s));
  }
  {
    auto s = base("perm1", "Perm (i^j + beta)", Dimensionality::scalable(1),
                  [](std::size_t n, const Params&) {
                    const double d = static_cast<double>(n);
                    return Bounds::uniform(-d, d);
                  });
    s.param_keys = {"beta", "literal"};
    s.params.beta = 0.5;
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=0 at (1,2,...,n)";
    s.optima = [](std::size_t n, const Params& p) {
      if (p.perm1_literal) return std::vector<KnownOptimum>{};
      Point x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1);
      return std::vector<KnownOptimum>{exact_optimum(std::move(x), 0.0)};
    };
    s.evaluate = [](PointView x, const Params& p, const NoiseRealization*) {
      return eval_perm1(x, p.beta, p.perm1_literal);
    };
    s.gradient = [](PointView x, const Params& p) { return grad::perm1(x, p.beta, p.perm1_literal); };
    specs.push_back(std::move(s));
  }
  {
    auto s = base("perm2", "Perm (i + beta)", Dimensionality::scalable(1), constant_bounds(-1.0, 1.0));
    s.param_keys = {"beta"};
    s.params.beta = 0.5;
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=0 at (1,1/2,...,1/n)";
    s.optima = [](std::size_t n, const Params&) {
      Point x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / static_cast<double>(i + 1);
      return std::vector<KnownOptimum>{exact_optimum(std::move(x), 0.0)};
    };
    s.evaluate = [](PointView x, const Params& p, const NoiseRealization*) { return eval_perm2(x, p.beta); };
    s.gradient = [](PointView x, const Params& p) { return grad::perm2(x, p.beta); };
    specs.push_back(std::move(s));
  }
  {
    auto s = base("rastrigin", "Rastrigin", Dimensionality::scalable(1), constant_bounds(-5.12, 5.12));
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=0 at (0,...,0)";
    s.optima = zero_at_origin();
    s.evaluate = plain(eval_rastrigin);
    s.gradient = plain_gradient(grad::rastrigin);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("rosenbrock", "Rosenbrock", Dimensionality::scalable(2), constant_bounds(-5.0, 5.0));
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=0 at (1,...,1)";
    s.optima = [](std::size_t n, const Params&) {
      return std::vector<KnownOptimum>{exact_optimum(Point(n, 1.0), 0.0)};
    };
    s.evaluate = plain(eval_rosenbrock);
    s.gradient = plain_gradient(grad::rosenbrock);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("schwefel", "Schwefel", Dimensionality::scalable(1), constant_bounds(-500.0, 500.0));
    s.singularity = Singularity::zero_coordinate;
    s.optimum_summary = "f*=-418.9829*n at x_i=420.9687";
    s.optima = [](std::size_t n, const Params&) {
      const double d = static_cast<double>(n);
      return std::vector<KnownOptimum>{approx_optimum(Point(n, 420.9687), -418.9829 * d, 1e-3 * d, 1e-4)};
    };
    s.evaluate = plain(eval_schwefel);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("six_hump", "Six-hump camel back", Dimensionality::fixed(2),
                  [](std::size_t, const Params&) { return Bounds({-3.0, -2.0}, {3.0, 2.0}); });
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=-1.0316 at (0.0898,-0.7126) and (-0.0898,0.7126)";
    s.optima = [](std::size_t, const Params&) {
      return std::vector<KnownOptimum>{
          approx_optimum({0.0898, -0.7126}, -1.0316, 5e-4, 1e-4, OptimumKind::one_of_many),
          approx_optimum({-0.0898, 0.7126}, -1.0316, 5e-4, 1e-4, OptimumKind::one_of_many)};
    };
    s.evaluate = plain(eval_six_hump);
    s.gradient = plain_gradient(grad::six_hump);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("shubert", "Shubert", Dimensionality::fixed(2), constant_bounds(-10.0, 10.0));
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=-186.7309, 18 global minima";
    s.optima = [](std::size_t, const Params&) {
      KnownOptimum opt;
      opt.value = -186.7309;
      opt.value_tolerance = 1e-3;
      opt.kind = OptimumKind::count;
      opt.count = 18;
      opt.precision = PointPrecision::approximate;
      opt.provenance = "literature";
      return std::vector<KnownOptimum>{opt};
    };
    s.evaluate = plain(eval_shubert);
    s.gradient = plain_gradient(grad::shubert);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("yang_modulus", "Yang modulus-exponential", Dimensionality::scalable(1),
                  constant_bounds(-2.0 * pi, 2.0 * pi));
    s.smooth = false;
    s.optimum_summary = "f*=0 at (0,...,0), non-smooth";
    s.optima = zero_at_origin();
    s.evaluate = plain(eval_yang_modulus);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("yang_multi", "Yang multiple global minima", Dimensionality::scalable(1),
                  constant_bounds(-10.0, 10.0));
    s.smooth = false;
    s.optimum_summary = "f*=-1/sqrt(e) at (+-1/2,+-1/2) for n=2";
    s.optima = [](std::size_t n, const Params&) {
      const double value = -std::exp(-0.5);
      std::vector<KnownOptimum> out;
      if (n == 2) {
        for (double a : {0.5, -0.5})
          for (double b : {0.5, -0.5})
            out.push_back(exact_optimum({a, b}, value, 5e-5, OptimumKind::one_of_many));
        return out;
      }
      // For |x_i| = a the value is -n a exp(-n a^2), minimized at a = 1/sqrt(2n).
      const double d = static_cast<double>(n);
      KnownOptimum opt = exact_optimum(Point(n, 1.0 / std::sqrt(2.0 * d)), -std::sqrt(d / 2.0) * std::exp(-0.5),
                                       1e-9, OptimumKind::one_of_many);
      opt.provenance = "derived";
      out.push_back(opt);
      return out;
    };
    s.evaluate = plain(eval_yang_multi);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("standing_wave", "Yang standing wave with a defect", Dimensionality::scalable(1),
                  constant_bounds(-20.0, 20.0));
    s.param_keys = {"beta", "m", "shift"};
    s.params.beta = 15.0;
    s.params.m = 5;
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=-1 at (0,...,0), or (pi,...,pi) with shift=pi";
    s.optima = [pi](std::size_t n, const Params& p) {
      if (p.shift == Shift::origin) return std::vector<KnownOptimum>{exact_optimum(Point(n, 0.0), -1.0)};
      // The envelope term is not exactly 1 at (pi,...,pi): the value there is
      // exp(-n (pi/beta)^(2m)) - 2, about -1 - 1.6e-7 n for the defaults.
      const double d = static_cast<double>(n);
      return std::vector<KnownOptimum>{approx_optimum(Point(n, pi), -1.0, 1e-6 * d, 1e-3)};
    };
    s.evaluate = [](PointView x, const Params& p, const NoiseRealization*) {
      return eval_standing_wave(x, p.beta, p.m, p.shift);
    };
    s.gradient = [](PointView x, const Params& p) { return grad::standing_wave(x, p.beta, p.m, p.shift); };
    specs.push_back(std::move(s));
  }
  {
    auto s = base("candlestick", "Yang candlestick", Dimensionality::scalable(1), constant_bounds(-10.0, 10.0));
    s.smooth = false;
    s.optimum_summary = "f*=-1 at (0,...,0)";
    s.optima = [](std::size_t n, const Params&) {
      return std::vector<KnownOptimum>{exact_optimum(Point(n, 0.0), -1.0)};
    };
    s.evaluate = plain(eval_candlestick);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("stochastic_grid", "Yang stochastic grid valleys", Dimensionality::fixed(2),
                  [](std::size_t, const Params& p) { return Bounds::uniform(0.0, static_cast<double>(p.K)); });
    s.param_keys = {"alpha", "beta", "K"};
    s.params.alpha = 1.0;
    s.params.beta = 1.0;
    s.params.K = 10;
    s.stochastic = true;
    s.smooth = true;
    s.optimum_summary = "random f* in [-(K^2+5),-5] near (pi,pi)";
    s.optima = [pi](std::size_t, const Params& p) {
      KnownOptimum opt;
      opt.point = Point{pi, pi};
      opt.value = -5.0;
      opt.value_tolerance = 1e-9;
      opt.kind = OptimumKind::random_value;
      opt.precision = PointPrecision::approximate;
      opt.provenance = "literature";
      opt.value_floor = -(static_cast<double>(p.K) * p.K + 5.0);
      return std::vector<KnownOptimum>{opt};
    };
    s.evaluate = [](PointView x, const Params& p, const NoiseRealization* noise) {
      return eval_stochastic_grid(x, require_noise(noise), p.alpha, p.beta, p.K);
    };
    specs.push_back(std::move(s));
  }
  {
    auto s = base("stochastic_singular", "Yang stochastic singular", Dimensionality::scalable(1),
                  constant_bounds(-5.0, 5.0));
    s.stochastic = true;
    s.smooth = false;
    s.optimum_summary = "f*=0 at (1,1/2,...,1/n) for every seed";
    s.optima = [](std::size_t n, const Params&) {
      Point x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / static_cast<double>(i + 1);
      return std::vector<KnownOptimum>{exact_optimum(std::move(x), 0.0)};
    };
    s.evaluate = [](PointView x, const Params&, const NoiseRealization* noise) {
      return eval_stochastic_singular(x, require_noise(noise));
    };
    specs.push_back(std::move(s));
  }
  {
    auto s = base("zakharov", "Zakharov", Dimensionality::scalable(1), constant_bounds(-5.0, 10.0));
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=0 at (0,...,0)";
    s.optima = zero_at_origin();
    s.evaluate = plain(eval_zakharov);
    s.gradient = plain_gradient(grad::zakharov);
    specs.push_back(std::move(s));
  }
  {
    auto s = base("zakharov_general", "Zakharov, K-term generalization", Dimensionality::scalable(1),
                  constant_bounds(-5.0, 10.0));
    s.param_keys = {"K"};
    s.params.K = 3;
    s.has_analytic_gradient = true;
    s.optimum_summary = "f*=0 at (0,...,0)";
    s.optima = zero_at_origin();
    s.evaluate = [](PointView x, const Params& p, const NoiseRealization*) {
      return eval_zakharov_general(x, p.K);
    };
    s.gradient = [](PointView x, const Params& p) { return grad::zakharov_general(x, p.K); };
    specs.push_back(std::move(s));
  }

  std::sort(specs.begin(), specs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return specs;
}

}  // namespace detail

/// Immutable, id-sorted collection of function specs.
class Registry {
 public:
  explicit Registry(std::vector<FunctionSpec> specs) : specs_(std::move(specs)) {
    std::sort(specs_.begin(), specs_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < specs_.size(); ++i)
      if (specs_[i].id == specs_[i - 1].id) throw Error(Errc::invalid_argument, "duplicate id " + specs_[i].id);
  }

  const FunctionSpec* find(std::string_view id) const {
    auto it = std::lower_bound(specs_.begin(), specs_.end(), id,
                               [](const FunctionSpec& s, std::string_view key) { return s.id < key; });
    return (it != specs_.end() && it->id == id) ? &*it : nullptr;
  }

  const FunctionSpec& lookup(std::string_view id) const {
    if (const auto* s = find(id)) return *s;
    throw Error(Errc::unknown_id, "no function named '" + std::string(id) + "'");
  }

  std::size_t size() const { return specs_.size(); }
  auto begin() const { return specs_.begin(); }
  auto end() const { return specs_.end(); }

 private:
  std::vector<FunctionSpec> specs_;
};

inline Registry register_builtin_suite() { return Registry(detail::builtin_specs()); }

/// Shared instance of the built-in suite.
inline const Registry& builtin_registry() {
  static const Registry registry = register_builtin_suite();
  return registry;
}

inline const FunctionSpec& lookup(std::string_view id) { return builtin_registry().lookup(id); }

// ---------------------------------------------------------------------------
// Parameter overrides
// ---------------------------------------------------------------------------

namespace detail {

inline double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    throw Error(Errc::parse_error, "cannot parse '" + std::string(text) + "' as a number for " + std::string(what));
  return v;
}

inline int parse_int(std::string_view text, std::string_view what) {
  int v = 0;
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    throw Error(Errc::parse_error, "cannot parse '" + std::string(text) + "' as an integer for " + std::string(what));
  return v;
}

inline bool parse_bool(std::string_view text, std::string_view what) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw Error(Errc::parse_error, "expected true/false for " + std::string(what));
}

}  // namespace detail

/// Apply `key=value` to params; the key must be one the function uses.
inline void set_param(const FunctionSpec& spec, Params& params, std::string_view key, std::string_view value) {
  if (!spec.uses_param(key))
    throw Error(Errc::invalid_argument, spec.id + " has no parameter '" + std::string(key) + "'");
  if (key == "m") {
    params.m = detail::parse_int(value, key);
    if (params.m < 1) throw Error(Errc::invalid_argument, "m must be >= 1");
  } else if (key == "beta") {
    params.beta = detail::parse_double(value, key);
    if (!(params.beta > 0.0)) throw Error(Errc::invalid_argument, "beta must be > 0");
  } else if (key == "alpha") {
    params.alpha = detail::parse_double(value, key);
    if (!(params.alpha > 0.0)) throw Error(Errc::invalid_argument, "alpha must be > 0");
  } else if (key == "K") {
    params.K = detail::parse_int(value, key);
    const int max_k = spec.id == "zakharov_general" ? kZakharovMaxTerms : 1000;
    if (params.K < 1 || params.K > max_k)
      throw Error(Errc::invalid_argument, "K must be in [1, " + std::to_string(max_k) + "]");
  } else if (key == "shift") {
    if (value == "origin") params.shift = Shift::origin;
    else if (value == "pi") params.shift = Shift::pi;
    else throw Error(Errc::invalid_argument, "shift must be 'origin' or 'pi'");
  } else if (key == "penalty_lambda") {
    params.penalty_lambda = detail::parse_double(value, key);
    if (!(params.penalty_lambda > 0.0)) throw Error(Errc::invalid_argument, "penalty_lambda must be > 0");
  } else if (key == "literal_sign") {
    params.easom_literal_sign = detail::parse_bool(value, key);
  } else if (key == "literal") {
    params.perm1_literal = detail::parse_bool(value, key);
  }
}

/// Parse "key=value" and apply it.
inline void set_param(const FunctionSpec& spec, Params& params, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw Error(Errc::parse_error, "parameter override must look like key=value");
  set_param(spec, params, assignment.substr(0, eq), assignment.substr(eq + 1));
}

// ---------------------------------------------------------------------------
// Objective
// ---------------------------------------------------------------------------

/// A registered function bound to a dimension, parameters and (for stochastic
/// functions) a frozen noise realization. Cheap to copy.
class Objective {
 public:
  Objective(const FunctionSpec& spec, std::size_t n, Params params, std::uint64_t seed = 0)
      : spec_(&spec), n_(n), params_(params), seed_(seed) {
    if (!spec.dims.accepts(n))
      throw Error(Errc::dimension_mismatch,
                  spec.id + " expects dimension " + spec.dims.describe() + ", got " + std::to_string(n));
    bounds_ = spec.bounds(n, params_);
    if (spec.stochastic) noise_ = std::make_shared<const NoiseRealization>(realize_noise(seed, params_.K, n));
  }

  Objective(const FunctionSpec& spec, std::size_t n) : Objective(spec, n, spec.params) {}

  /// Replace the noise tables, e.g. with constant_noise() in tests.
  Objective with_noise(NoiseRealization noise) const {
    Objective copy = *this;
    copy.noise_ = std::make_shared<const NoiseRealization>(std::move(noise));
    return copy;
  }

  double operator()(PointView x) const {
    detail::require_dim(x, n_);
    return spec_->evaluate(x, params_, noise_.get());
  }

  bool has_gradient() const { return spec_->has_analytic_gradient; }

  Point gradient(PointView x) const {
    if (!spec_->has_analytic_gradient)
      throw Error(Errc::unsupported_function, spec_->id + " has no analytic gradient");
    detail::require_dim(x, n_);
    return spec_->gradient(x, params_);
  }

  std::vector<KnownOptimum> optima() const { return spec_->optima(n_, params_); }

  const FunctionSpec& spec() const { return *spec_; }
  const std::string& id() const { return spec_->id; }
  std::size_t dim() const { return n_; }
  const Params& params() const { return params_; }
  const Bounds& bounds() const { return bounds_; }
  std::uint64_t seed() const { return seed_; }
  const NoiseRealization* noise() const { return noise_.get(); }

 private:
  const FunctionSpec* spec_;
  std::size_t n_;
  Params params_;
  std::uint64_t seed_;
  Bounds bounds_;
  std::shared_ptr<const NoiseRealization> noise_;
};

inline Objective make_objective(std::string_view id, std::size_t n, std::uint64_t seed = 0) {
  const auto& spec = lookup(id);
  return Objective(spec, n, spec.params, seed);
}

/// Closed-form gradient with the function's default parameters.
inline Point analytic_gradient(std::string_view id, PointView x) {
  const auto& spec = lookup(id);
  if (!spec.has_analytic_gradient)
    throw Error(Errc::unsupported_function, spec.id + " has no analytic gradient");
  return spec.gradient(x, spec.params);
}

}  // namespace testfn
