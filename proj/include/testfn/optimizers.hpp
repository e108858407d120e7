// Baseline optimizers: uniform random search, bounded Nelder-Mead and
// DE/rand/1/bin. All of them work on a Problem through a budgeted Evaluator
// that counts calls and keeps the best-so-far trace.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "testfn/core.hpp"

namespace testfn {

/// Box-bounded scalar problem. `repair`, when set, maps a proposal to the
/// point that is actually evaluated (e.g. projection onto a constraint set).
struct Problem {
  std::size_t n = 0;
  Bounds bounds;
  std::function<double(PointView)> value;
  std::function<void(Point&)> repair;
};

struct TraceEntry {
  std::size_t evals = 0;
  double best = 0.0;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct OptimizerResult {
  Point best_point;
  double best_value = std::numeric_limits<double>::infinity();
  std::size_t evals = 0;
  std::vector<TraceEntry> trace;  // checkpoints at 1, 2, 4, 8, ... and the final count
};

/// Budget-enforcing wrapper; every objective call goes through here.
class Evaluator {
 public:
  Evaluator(const Problem& problem, std::size_t budget) : problem_(problem), budget_(budget) {}

  bool exhausted() const { return evals_ >= budget_; }
  std::size_t evals() const { return evals_; }
  std::size_t remaining() const { return budget_ - evals_; }

  /// Repairs `x` in place, evaluates it and updates the best-so-far record.
  double operator()(Point& x) {
    if (exhausted()) throw Error(Errc::invalid_argument, "evaluation budget exceeded");
    if (problem_.repair) problem_.repair(x);
    const double v = problem_.value(x);
    ++evals_;
    if (result_.best_point.empty() || v < result_.best_value || std::isnan(result_.best_value)) {
      result_.best_value = v;
      result_.best_point = x;
    }
    if (evals_ == next_checkpoint_) {
      result_.trace.push_back({evals_, result_.best_value});
      next_checkpoint_ *= 2;
    }
    return v;
  }

  OptimizerResult finish() {
    result_.evals = evals_;
    if (evals_ > 0 && (result_.trace.empty() || result_.trace.back().evals != evals_))
      result_.trace.push_back({evals_, result_.best_value});
    return result_;
  }

 private:
  const Problem& problem_;
  std::size_t budget_;
  std::size_t evals_ = 0;
  std::size_t next_checkpoint_ = 1;
  OptimizerResult result_;
};

inline void validate_problem(const Problem& problem, std::size_t budget) {
  if (problem.n < 1) throw Error(Errc::invalid_argument, "problem dimension must be >= 1");
  if (budget < 1) throw Error(Errc::invalid_argument, "budget must be >= 1");
  if (!problem.value) throw Error(Errc::invalid_argument, "problem has no objective");
  if (!problem.bounds.fits_dimension(problem.n)) throw Error(Errc::dimension_mismatch, "bounds do not fit problem");
}

// ---------------------------------------------------------------------------

inline OptimizerResult random_search(const Problem& problem, std::size_t budget, Rng& rng) {
  validate_problem(problem, budget);
  Evaluator eval(problem, budget);
  while (!eval.exhausted()) {
    Point x = sample_uniform(problem.bounds, problem.n, rng);
    eval(x);
  }
  return eval.finish();
}

// ---------------------------------------------------------------------------

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double initial_edge = 0.05;      // fraction of each box width
  double collapse_diameter = 1e-12;
  bool restart_on_collapse = true;  // otherwise stop once collapsed
};

namespace detail {

inline double simplex_diameter(const std::vector<Point>& simplex) {
  double d = 0.0;
  for (std::size_t a = 1; a < simplex.size(); ++a)
    for (std::size_t i = 0; i < simplex[a].size(); ++i) d = std::max(d, std::abs(simplex[a][i] - simplex[0][i]));
  return d;
}

}  // namespace detail

/// Bounded Nelder-Mead. Proposals are clamped to the box coordinate-wise.
inline OptimizerResult nelder_mead(const Problem& problem, std::size_t budget, Point start,
                                   const NelderMeadOptions& opt = {}) {
  validate_problem(problem, budget);
  if (start.size() != problem.n) throw Error(Errc::dimension_mismatch, "start point has the wrong dimension");
  if (!contains(problem.bounds, start)) throw Error(Errc::invalid_argument, "start point lies outside the bounds");

  const std::size_t n = problem.n;
  const Bounds& box = problem.bounds;
  Evaluator eval(problem, budget);

  auto clamp = [&box](Point& x) { clamp_to(box, x); };
  auto blend = [n](const Point& a, const Point& b, double t) {  // a + t (b - a)
    Point out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  std::vector<Point> simplex;
  std::vector<double> values;

  // Builds the n+1 vertices around `origin`; returns false if the budget ran out.
  auto build = [&](Point origin, double origin_value, bool evaluated) {
    simplex.assign(1, std::move(origin));
    values.assign(1, origin_value);
    if (!evaluated) {
      if (eval.exhausted()) return false;
      values[0] = eval(simplex[0]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (eval.exhausted()) return false;
      Point v = simplex[0];
      const double step = opt.initial_edge * box.width(i);
      v[i] = (v[i] + step <= box.upper(i)) ? v[i] + step : v[i] - step;
      const double fv = eval(v);
      simplex.push_back(std::move(v));
      values.push_back(fv);
    }
    return true;
  };

  if (!build(std::move(start), 0.0, false)) return eval.finish();

  std::vector<std::size_t> order(n + 1);
  while (!eval.exhausted()) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    {
      std::vector<Point> s(n + 1);
      std::vector<double> f(n + 1);
      for (std::size_t k = 0; k <= n; ++k) {
        s[k] = std::move(simplex[order[k]]);
        f[k] = values[order[k]];
      }
      simplex = std::move(s);
      values = std::move(f);
    }

    if (detail::simplex_diameter(simplex) < opt.collapse_diameter) {
      if (!opt.restart_on_collapse) break;
      if (!build(simplex[0], values[0], true)) break;
      continue;
    }

    Point centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);

    const Point& worst = simplex[n];
    Point reflected = blend(centroid, worst, -opt.reflection);
    clamp(reflected);
    const double fr = eval(reflected);

    if (fr < values[0]) {
      if (eval.exhausted()) {
        simplex[n] = std::move(reflected);
        values[n] = fr;
        break;
      }
      Point expanded = blend(centroid, reflected, opt.expansion);
      clamp(expanded);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[n] = std::move(expanded);
        values[n] = fe;
      } else {
        simplex[n] = std::move(reflected);
        values[n] = fr;
      }
      continue;
    }
    if (fr < values[n - 1]) {
      simplex[n] = std::move(reflected);
      values[n] = fr;
      continue;
    }
    if (eval.exhausted()) break;

    const bool outside = fr < values[n];
    Point contracted = outside ? blend(centroid, reflected, opt.contraction) : blend(centroid, worst, opt.contraction);
    clamp(contracted);
    const double fc = eval(contracted);
    if (outside ? fc <= fr : fc < values[n]) {
      simplex[n] = std::move(contracted);
      values[n] = fc;
      continue;
    }

    for (std::size_t k = 1; k <= n && !eval.exhausted(); ++k) {
      simplex[k] = blend(simplex[0], simplex[k], opt.shrink);
      clamp(simplex[k]);
      values[k] = eval(simplex[k]);
    }
  }
  return eval.finish();
}

// ---------------------------------------------------------------------------

struct DifferentialEvolutionOptions {
  double population_factor = 10.0;  // population = max(4, factor * n)
  double F = 0.7;
  double CR = 0.9;
};

/// DE/rand/1/bin with clamp-to-bounds repair and generational replacement.
inline OptimizerResult differential_evolution(const Problem& problem, std::size_t budget, Rng& rng,
                                              const DifferentialEvolutionOptions& opt = {}) {
  validate_problem(problem, budget);
  if (!(opt.population_factor > 0.0)) throw Error(Errc::invalid_argument, "population factor must be > 0");
  if (!(opt.CR >= 0.0 && opt.CR <= 1.0)) throw Error(Errc::invalid_argument, "CR must be in [0, 1]");

  const std::size_t n = problem.n;
  const std::size_t pop_size =
      std::max<std::size_t>(4, static_cast<std::size_t>(std::llround(opt.population_factor * static_cast<double>(n))));
  Evaluator eval(problem, budget);

  std::vector<Point> pop;
  std::vector<double> fit;
  pop.reserve(pop_size);
  for (std::size_t k = 0; k < pop_size && !eval.exhausted(); ++k) {
    Point x = sample_uniform(problem.bounds, n, rng);
    fit.push_back(eval(x));
    pop.push_back(std::move(x));
  }
  if (pop.size() < pop_size) return eval.finish();

  std::vector<Point> next = pop;
  std::vector<double> next_fit = fit;
  while (!eval.exhausted()) {
    for (std::size_t i = 0; i < pop_size && !eval.exhausted(); ++i) {
      std::size_t r1, r2, r3;
      do r1 = rng.below(pop_size); while (r1 == i);
      do r2 = rng.below(pop_size); while (r2 == i || r2 == r1);
      do r3 = rng.below(pop_size); while (r3 == i || r3 == r1 || r3 == r2);
      const std::size_t forced = rng.below(n);
      Point trial = pop[i];
      for (std::size_t j = 0; j < n; ++j)
        if (j == forced || rng.uniform() < opt.CR) trial[j] = pop[r1][j] + opt.F * (pop[r2][j] - pop[r3][j]);
      clamp_to(problem.bounds, trial);
      const double ft = eval(trial);
      if (ft <= fit[i]) {
        next[i] = std::move(trial);
        next_fit[i] = ft;
      } else {
        next[i] = pop[i];
        next_fit[i] = fit[i];
      }
    }
    pop.swap(next);
    fit.swap(next_fit);
  }
  return eval.finish();
}

}  // namespace testfn
