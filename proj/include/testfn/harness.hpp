// Benchmark trials: configuration, validation and execution of the baseline
// optimizers against registered functions.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "testfn/constrained.hpp"
#include "testfn/optimizers.hpp"
#include "testfn/registry.hpp"

namespace testfn {

enum class OptimizerKind { random_search, nelder_mead, differential_evolution };
enum class ConstraintMode { none, projection, penalty };

inline const char* to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::random_search: return "random";
    case OptimizerKind::nelder_mead: return "nm";
    case OptimizerKind::differential_evolution: return "de";
  }
  return "unknown";
}

inline const char* to_string(ConstraintMode m) {
  switch (m) {
    case ConstraintMode::none: return "none";
    case ConstraintMode::projection: return "projection";
    case ConstraintMode::penalty: return "penalty";
  }
  return "unknown";
}

inline OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "random" || name == "random_search") return OptimizerKind::random_search;
  if (name == "nm" || name == "nelder_mead") return OptimizerKind::nelder_mead;
  if (name == "de" || name == "differential_evolution") return OptimizerKind::differential_evolution;
  throw Error(Errc::invalid_argument, "unknown optimizer '" + std::string(name) + "' (random, nm, de)");
}

inline ConstraintMode parse_constraint_mode(std::string_view name) {
  if (name == "projection") return ConstraintMode::projection;
  if (name == "penalty") return ConstraintMode::penalty;
  if (name == "none") return ConstraintMode::none;
  throw Error(Errc::invalid_argument, "constraint mode must be projection or penalty");
}

struct TrialConfig {
  std::string function;
  std::size_t n = 2;
  std::uint64_t seed = 0;
  std::size_t budget = 1000;
  OptimizerKind optimizer = OptimizerKind::differential_evolution;
  std::map<std::string, double> hyperparameters;  // overrides of the optimizer defaults
  std::vector<std::string> params;                // "key=value" function parameter overrides
  std::optional<ConstraintMode> constraint_mode;  // product_sphere only; defaults to projection
  std::optional<Point> start;                     // Nelder-Mead start; sampled from the seed if absent
};

struct RunRecord {
  TrialConfig config;
  ConstraintMode constraint_mode = ConstraintMode::none;
  Params params;
  Point best_point;
  double best_value = 0.0;
  std::size_t evals = 0;
  std::vector<TraceEntry> trace;
  double wall_time_s = 0.0;
};

namespace detail {

inline const std::vector<std::string>& hyperparameter_keys(OptimizerKind k) {
  static const std::vector<std::string> random_keys{};
  static const std::vector<std::string> nm_keys{"reflection", "expansion", "contraction", "shrink",
                                                "initial_edge", "collapse_diameter"};
  static const std::vector<std::string> de_keys{"population_factor", "F", "CR"};
  switch (k) {
    case OptimizerKind::random_search: return random_keys;
    case OptimizerKind::nelder_mead: return nm_keys;
    case OptimizerKind::differential_evolution: return de_keys;
  }
  return random_keys;
}

inline NelderMeadOptions nm_options(const std::map<std::string, double>& hp) {
  NelderMeadOptions o;
  for (const auto& [k, v] : hp) {
    if (k == "reflection") o.reflection = v;
    else if (k == "expansion") o.expansion = v;
    else if (k == "contraction") o.contraction = v;
    else if (k == "shrink") o.shrink = v;
    else if (k == "initial_edge") o.initial_edge = v;
    else if (k == "collapse_diameter") o.collapse_diameter = v;
  }
  return o;
}

inline DifferentialEvolutionOptions de_options(const std::map<std::string, double>& hp) {
  DifferentialEvolutionOptions o;
  for (const auto& [k, v] : hp) {
    if (k == "population_factor") o.population_factor = v;
    else if (k == "F") o.F = v;
    else if (k == "CR") o.CR = v;
  }
  return o;
}

}  // namespace detail

/// Checks everything that can be checked without running the trial and
/// returns the resolved function parameters.
inline Params validate(const TrialConfig& cfg) {
  const auto& spec = lookup(cfg.function);
  if (!spec.dims.accepts(cfg.n))
    throw Error(Errc::dimension_mismatch,
                spec.id + " expects dimension " + spec.dims.describe() + ", got " + std::to_string(cfg.n));
  if (cfg.budget < 1) throw Error(Errc::invalid_argument, "budget must be >= 1");
  const auto& keys = detail::hyperparameter_keys(cfg.optimizer);
  for (const auto& [k, v] : cfg.hyperparameters)
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      throw Error(Errc::invalid_argument,
                  std::string("optimizer ") + to_string(cfg.optimizer) + " has no hyperparameter '" + k + "'");
  if (cfg.constraint_mode && *cfg.constraint_mode != ConstraintMode::none && !spec.constrained)
    throw Error(Errc::invalid_argument, "constraint modes only apply to constrained functions");
  Params params = spec.params;
  for (const auto& p : cfg.params) set_param(spec, params, p);
  if (cfg.start) {
    if (cfg.start->size() != cfg.n) throw Error(Errc::dimension_mismatch, "start point has the wrong dimension");
    if (!contains(spec.bounds(cfg.n, params), *cfg.start))
      throw Error(Errc::invalid_argument, "start point lies outside the bounds");
  }
  return params;
}

/// Radial projection onto the unit sphere after clamping to [0, 1]^n. The zero
/// vector has no direction and maps to the first unit vector.
inline void sphere_repair(const Bounds& box, Point& x) {
  clamp_to(box, x);
  if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
    std::fill(x.begin(), x.end(), 0.0);
    x[0] = 1.0;
    return;
  }
  x = project_to_sphere(x);
}

inline RunRecord run_trial(const TrialConfig& cfg) {
  const Params params = validate(cfg);
  const auto& spec = lookup(cfg.function);
  const Objective objective(spec, cfg.n, params, cfg.seed);

  RunRecord rec;
  rec.config = cfg;
  rec.params = params;
  rec.constraint_mode = spec.constrained ? cfg.constraint_mode.value_or(ConstraintMode::projection)
                                         : ConstraintMode::none;

  Problem problem;
  problem.n = cfg.n;
  problem.bounds = objective.bounds();
  if (rec.constraint_mode == ConstraintMode::penalty) {
    const double lambda = params.penalty_lambda;
    problem.value = [lambda](PointView x) { return penalized_objective(x, lambda); };
  } else {
    problem.value = [&objective](PointView x) { return objective(x); };
  }
  if (rec.constraint_mode == ConstraintMode::projection) {
    problem.repair = [box = problem.bounds](Point& x) { sphere_repair(box, x); };
  }

  const auto t0 = std::chrono::steady_clock::now();
  OptimizerResult result;
  switch (cfg.optimizer) {
    case OptimizerKind::random_search: {
      Rng rng(cfg.seed, kOptimizerStream);
      result = random_search(problem, cfg.budget, rng);
      break;
    }
    case OptimizerKind::nelder_mead: {
      Point start;
      if (cfg.start) {
        start = *cfg.start;
      } else {
        Rng rng(cfg.seed, kStartStream);
        start = sample_uniform(problem.bounds, cfg.n, rng);
      }
      result = nelder_mead(problem, cfg.budget, std::move(start), detail::nm_options(cfg.hyperparameters));
      break;
    }
    case OptimizerKind::differential_evolution: {
      Rng rng(cfg.seed, kOptimizerStream);
      result = differential_evolution(problem, cfg.budget, rng, detail::de_options(cfg.hyperparameters));
      break;
    }
  }
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rec.best_point = std::move(result.best_point);
  rec.best_value = result.best_value;
  rec.evals = result.evals;
  rec.trace = std::move(result.trace);
  return rec;
}

struct SuiteEntry {
  std::optional<RunRecord> record;
  std::string error;

  bool ok() const { return record.has_value(); }
};

/// Runs every trial; failures become error entries at the same position.
/// With threads > 1 trials run concurrently; results stay in input order.
inline std::vector<SuiteEntry> run_suite(const std::vector<TrialConfig>& configs, std::size_t threads = 1) {
  std::vector<SuiteEntry> out(configs.size());
  auto run_one = [&](std::size_t i) {
    try {
      out[i].record = run_trial(configs[i]);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  };
  if (threads <= 1 || configs.size() <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) run_one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, configs.size()); ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) run_one(i);
      });
  }
  return out;
}

}  // namespace testfn
