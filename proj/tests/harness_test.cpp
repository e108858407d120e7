#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "testfn/testfn.hpp"

using namespace testfn;

namespace {

TrialConfig config(std::string fn, std::size_t n, OptimizerKind opt, std::size_t budget, std::uint64_t seed = 0) {
  TrialConfig c;
  c.function = std::move(fn);
  c.n = n;
  c.optimizer = opt;
  c.budget = budget;
  c.seed = seed;
  return c;
}

void expect_monotone(const RunRecord& r) {
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_LT(r.trace[i - 1].evals, r.trace[i].evals);
    EXPECT_LE(r.trace[i].best, r.trace[i - 1].best);
  }
  EXPECT_EQ(r.trace.back().best, r.best_value);
  EXPECT_EQ(r.trace.back().evals, r.evals);
}

// Polished six-hump minimum used as the reference value.
double six_hump_reference() {
  Problem p{2, lookup("six_hump").bounds(2, {}), [](PointView x) { return eval_six_hump(x); }, {}};
  NelderMeadOptions nm;
  nm.initial_edge = 1e-3;
  nm.collapse_diameter = 1e-14;
  nm.restart_on_collapse = false;
  return nelder_mead(p, 20000, Point{0.0898, -0.7126}, nm).best_value;
}

}  // namespace

TEST(RandomSearch, SphereSmoke) {
  const auto r = run_trial(config("sphere", 2, OptimizerKind::random_search, 10000, 1));
  EXPECT_LT(r.best_value, 0.05);
  EXPECT_EQ(r.evals, 10000u);
  expect_monotone(r);
}

TEST(RandomSearch, BudgetOne) {
  const auto r = run_trial(config("rastrigin", 3, OptimizerKind::random_search, 1, 4));
  ASSERT_EQ(r.evals, 1u);
  EXPECT_EQ(r.best_value, eval_rastrigin(r.best_point));
  ASSERT_EQ(r.trace.size(), 1u);
}

TEST(RandomSearch, Deterministic) {
  const auto cfg = config("griewank", 3, OptimizerKind::random_search, 500, 9);
  EXPECT_EQ(record_to_json(run_trial(cfg)).dump(), record_to_json(run_trial(cfg)).dump());
}

TEST(NelderMead, RosenbrockFromOrigin) {
  auto cfg = config("rosenbrock", 2, OptimizerKind::nelder_mead, 10000);
  cfg.start = Point{0, 0};
  const auto r = run_trial(cfg);
  EXPECT_LT(r.best_value, 1e-8);
  expect_monotone(r);
}

TEST(NelderMead, StartAtOptimum) {
  auto cfg = config("sphere", 3, OptimizerKind::nelder_mead, 100);
  cfg.start = Point{0, 0, 0};
  const auto r = run_trial(cfg);
  EXPECT_EQ(r.best_value, 0.0);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace.front().evals, 1u);
  EXPECT_EQ(r.trace.front().best, 0.0);
}

TEST(NelderMead, SixHumpConverges) {
  auto cfg = config("six_hump", 2, OptimizerKind::nelder_mead, 5000);
  cfg.start = Point{0.1, -0.7};
  const auto r = run_trial(cfg);
  EXPECT_NEAR(r.best_value, six_hump_reference(), 1e-6);
  EXPECT_NEAR(r.best_value, -1.0316, 5e-4);
}

TEST(NelderMead, InvalidStart) {
  auto cfg = config("sphere", 2, OptimizerKind::nelder_mead, 100);
  cfg.start = Point{10, 0};
  EXPECT_THROW(run_trial(cfg), Error);
  cfg.start = Point{0, 0, 0};
  EXPECT_THROW(run_trial(cfg), Error);
}

TEST(DifferentialEvolution, SphereTen) {
  const auto r = run_trial(config("sphere", 10, OptimizerKind::differential_evolution, 100000, 0));
  EXPECT_LT(r.best_value, 1e-6);
  expect_monotone(r);
}

TEST(DifferentialEvolution, AckleyFiveMostSeeds) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    if (run_trial(config("ackley", 5, OptimizerKind::differential_evolution, 50000, seed)).best_value < 1e-2) ++hits;
  EXPECT_GE(hits, 9);
}

TEST(DifferentialEvolution, StochasticGridReachesFixedWell) {
  const auto r = run_trial(config("stochastic_grid", 2, OptimizerKind::differential_evolution, 20000, 3));
  EXPECT_LE(r.best_value, -5.0);
  expect_monotone(r);
}

TEST(Optimizers, BudgetAccountingExact) {
  std::size_t calls = 0;
  Problem p{3, Bounds::uniform(-5, 5), [&calls](PointView x) { ++calls; return eval_rosenbrock(x); }, {}};
  for (std::size_t budget : {1u, 7u, 100u, 1234u}) {
    calls = 0;
    Rng a(1);
    EXPECT_EQ(random_search(p, budget, a).evals, calls);
    EXPECT_EQ(calls, budget);
    calls = 0;
    EXPECT_EQ(nelder_mead(p, budget, Point{0, 0, 0}).evals, calls);
    EXPECT_EQ(calls, budget);
    calls = 0;
    Rng b(1);
    EXPECT_EQ(differential_evolution(p, budget, b).evals, calls);
    EXPECT_EQ(calls, budget);
  }
}

TEST(Optimizers, TraceCheckpointsGeometric) {
  const auto r = run_trial(config("sphere", 2, OptimizerKind::random_search, 100, 0));
  std::vector<std::size_t> at;
  for (const auto& t : r.trace) at.push_back(t.evals);
  EXPECT_EQ(at, (std::vector<std::size_t>{1, 2, 4, 8, 16, 32, 64, 100}));
}

TEST(Optimizers, TracesMonotoneEverywhere) {
  for (const auto& spec : builtin_registry())
    for (auto opt : {OptimizerKind::random_search, OptimizerKind::nelder_mead, OptimizerKind::differential_evolution}) {
      const auto r = run_trial(config(spec.id, spec.dims.default_dim(), opt, 600, 2));
      expect_monotone(r);
      EXPECT_EQ(r.evals, 600u) << spec.id;
    }
}

TEST(Constraint, ProjectionKeepsEveryPointFeasible) {
  const Bounds box = Bounds::uniform(0, 1);
  double worst = 0.0;
  Problem p{3, box, [&worst](PointView x) {
              worst = std::max(worst, std::abs(constraint_violation(x)));
              return eval_product_sphere(x);
            },
            [box](Point& x) { sphere_repair(box, x); }};
  Rng a(0), b(0);
  differential_evolution(p, 5000, b);
  random_search(p, 2000, a);
  nelder_mead(p, 2000, Point{0.2, 0.9, 0.1});
  EXPECT_LE(worst, 1e-12);
}

TEST(Constraint, ProjectionDefaultForProductSphere) {
  const auto r = run_trial(config("product_sphere", 2, OptimizerKind::differential_evolution, 20000, 1));
  EXPECT_EQ(r.constraint_mode, ConstraintMode::projection);
  EXPECT_NEAR(r.best_value, -1.0, 1e-3);
  EXPECT_LE(std::abs(constraint_violation(r.best_point)), 1e-12);
}

TEST(Constraint, SphereRepairZeroVector) {
  Point x{0, 0};
  sphere_repair(Bounds::uniform(0, 1), x);
  EXPECT_EQ(x, (Point{1, 0}));
}

TEST(Validate, Rejections) {
  EXPECT_THROW(validate(config("nosuch", 2, OptimizerKind::random_search, 10)), Error);
  EXPECT_THROW(validate(config("shubert", 3, OptimizerKind::random_search, 10)), Error);
  EXPECT_THROW(validate(config("sphere", 2, OptimizerKind::random_search, 0)), Error);
  auto c = config("sphere", 2, OptimizerKind::differential_evolution, 10);
  c.hyperparameters["reflection"] = 1.0;
  EXPECT_THROW(validate(c), Error);
  c = config("sphere", 2, OptimizerKind::random_search, 10);
  c.constraint_mode = ConstraintMode::penalty;
  EXPECT_THROW(validate(c), Error);
  EXPECT_THROW(parse_optimizer("cmaes"), Error);
  EXPECT_THROW(parse_constraint_mode("reflect"), Error);
}

TEST(Validate, HyperparametersApply) {
  auto a = config("sphere", 4, OptimizerKind::differential_evolution, 2000, 3);
  auto b = a;
  b.hyperparameters["F"] = 0.5;
  EXPECT_NE(run_trial(a).best_value, run_trial(b).best_value);
}

TEST(Suite, Empty) { EXPECT_TRUE(run_suite({}).empty()); }

TEST(Suite, ErrorIsolation) {
  const std::vector<TrialConfig> cfgs{config("sphere", 2, OptimizerKind::random_search, 50),
                                      config("shubert", 5, OptimizerKind::random_search, 50),
                                      config("rastrigin", 2, OptimizerKind::differential_evolution, 50)};
  for (std::size_t threads : {1u, 3u}) {
    const auto out = run_suite(cfgs, threads);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_TRUE(out[0].ok());
    EXPECT_FALSE(out[1].ok());
    EXPECT_NE(out[1].error.find("dimension"), std::string::npos);
    EXPECT_TRUE(out[2].ok());
    EXPECT_EQ(out[0].record->config.function, "sphere");
    EXPECT_EQ(out[2].record->config.function, "rastrigin");
  }
}

TEST(Suite, RepeatedConfigsIdentical) {
  const std::vector<TrialConfig> cfgs(10, config("ackley", 3, OptimizerKind::differential_evolution, 2000, 5));
  const auto out = run_suite(cfgs, 4);
  const auto first = record_to_json(*out[0].record).dump();
  for (const auto& e : out) EXPECT_EQ(record_to_json(*e.record).dump(), first);
}

TEST(Suite, ParallelMatchesSequential) {
  std::vector<TrialConfig> cfgs;
  for (std::uint64_t s = 0; s < 8; ++s) cfgs.push_back(config("griewank", 3, OptimizerKind::nelder_mead, 800, s));
  const auto a = run_suite(cfgs, 1), b = run_suite(cfgs, 4);
  for (std::size_t i = 0; i < cfgs.size(); ++i)
    EXPECT_EQ(record_to_json(*a[i].record).dump(), record_to_json(*b[i].record).dump());
}

TEST(Records, JsonFields) {
  const auto j = record_to_json(run_trial(config("sphere", 2, OptimizerKind::random_search, 10, 3)));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"function", "n", "seed", "budget", "optimizer", "constraint_mode", "params",
                                            "hyperparameters", "evals", "best_value", "best_point", "trace"}));
  EXPECT_EQ(j["trace"].back()[0], 10);
}

TEST(Records, SummaryCsv) {
  std::ostringstream out;
  write_summary_csv(out, {run_trial(config("sphere", 2, OptimizerKind::random_search, 10, 3))});
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "function,optimizer,seed,best_value,evals");
  EXPECT_NE(out.str().find("sphere,random,3,"), std::string::npos);
}

TEST(Records, ReadAndAggregate) {
  std::istringstream in(
      "{\"_meta\":{\"tool\":\"testfn\"}}\n"
      "{\"function\":\"ackley\",\"optimizer\":\"de\",\"seed\":0,\"best_value\":3.0,\"evals\":10}\n"
      "\n"
      "{\"function\":\"ackley\",\"optimizer\":\"de\",\"seed\":1,\"best_value\":1.0,\"evals\":20}\n"
      "{\"function\":\"ackley\",\"optimizer\":\"de\",\"seed\":2,\"best_value\":2.0,\"evals\":30}\n"
      "{\"function\":\"ackley\",\"optimizer\":\"de\",\"seed\":3,\"best_value\":9.0,\"evals\":40}\n");
  const auto rows = aggregate(read_records(in));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].runs, 4u);
  EXPECT_EQ(rows[0].median, 2.5);
  EXPECT_EQ(rows[0].best, 1.0);
  EXPECT_EQ(rows[0].worst, 9.0);
  EXPECT_EQ(rows[0].mean_evals, 25.0);
}

TEST(Records, MalformedLineNamed) {
  std::istringstream in("{\"function\":\"a\",\"optimizer\":\"de\",\"seed\":0,\"best_value\":1,\"evals\":1}\n{oops\n");
  try {
    read_records(in, "runs.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::parse_error);
    EXPECT_NE(std::string(e.what()).find("runs.jsonl:2"), std::string::npos);
  }
}
