// Acceptance gate: one PASS/FAIL line per criterion, details for every miss.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "testfn/cli.hpp"
#include "testfn/testfn.hpp"

using namespace testfn;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Objective with_params(const std::string& id, std::size_t n, std::vector<std::string> overrides, std::uint64_t seed = 0) {
  const auto& spec = lookup(id);
  Params p = spec.params;
  for (const auto& o : overrides) set_param(spec, p, o);
  return Objective(spec, n, p, seed);
}

void check_value(Outcome& o, const Objective& f, const Point& x, double want, double tol, const std::string& label) {
  const double err = std::abs(f(x) - want);
  o.require(err <= tol, label + ": |f - f*| = " + num(err) + " > " + num(tol));
}

// 1 -------------------------------------------------------------------------
Outcome optimum_values() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t n = 2; n <= 5; ++n) {
    const Point zero(n, 0.0);
    for (const char* id : {"ackley", "sphere", "hyper_ellipsoid", "sum_powers", "griewank", "rastrigin", "zakharov",
                           "zakharov_general", "yang_modulus"})
      check_value(o, make_objective(id, n), zero, 0.0, 1e-9, std::string(id) + " n=" + std::to_string(n));
    check_value(o, make_objective("rosenbrock", n), Point(n, 1.0), 0.0, 1e-9, "rosenbrock n=" + std::to_string(n));
    Point perm1(n), perm2(n);
    for (std::size_t i = 0; i < n; ++i) {
      perm1[i] = static_cast<double>(i + 1);
      perm2[i] = 1.0 / static_cast<double>(i + 1);
    }
    check_value(o, make_objective("perm1", n), perm1, 0.0, 1e-9, "perm1 n=" + std::to_string(n));
    check_value(o, make_objective("perm2", n), perm2, 0.0, 1e-9, "perm2 n=" + std::to_string(n));
    check_value(o, with_params("standing_wave", n, {"shift=origin"}), zero, -1.0, 1e-9,
                "standing_wave(origin) n=" + std::to_string(n));
    check_value(o, with_params("standing_wave", n, {"shift=pi"}), Point(n, pi), -1.0, 1e-9,
                "standing_wave(pi) n=" + std::to_string(n));
    check_value(o, make_objective("candlestick", n), zero, -1.0, 1e-9, "candlestick n=" + std::to_string(n));
    check_value(o, make_objective("stochastic_singular", n, 3), perm2, 0.0, 1e-9,
                "stochastic_singular n=" + std::to_string(n));
    check_value(o, make_objective("easom_nd", n), Point(n, pi), -1.0, 1e-12, "easom_nd n=" + std::to_string(n));
  }
  check_value(o, make_objective("easom_2d", 2), Point{pi, pi}, -1.0, 1e-12, "easom_2d");
  check_value(o, make_objective("michalewicz", 2), Point{2.20319, 1.57049}, -1.8013, 5e-4, "michalewicz 2d");
  for (std::size_t n : {1u, 2u, 5u}) {
    const double dn = static_cast<double>(n);
    check_value(o, make_objective("schwefel", n), Point(n, 420.9687), -418.9829 * dn, 1e-3 * dn,
                "schwefel n=" + std::to_string(n));
  }
  check_value(o, make_objective("six_hump", 2), Point{0.0898, -0.7126}, -1.0316, 5e-4, "six_hump (0.0898,-0.7126)");
  check_value(o, make_objective("six_hump", 2), Point{-0.0898, 0.7126}, -1.0316, 5e-4, "six_hump (-0.0898,0.7126)");
  for (double sx : {0.5, -0.5})
    for (double sy : {0.5, -0.5})
      check_value(o, make_objective("yang_multi", 2), Point{sx, sy}, -0.606531, 5e-5,
                  "yang_multi (" + num(sx) + "," + num(sy) + ")");
  for (std::size_t n : {2u, 3u, 4u})
    check_value(o, make_objective("product_sphere", n), Point(n, 1.0 / std::sqrt(static_cast<double>(n))), -1.0, 1e-9,
                "product_sphere n=" + std::to_string(n));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 1.0, "runtime " + num(secs) + " s >= 1 s");
  return o;
}

// 2 -------------------------------------------------------------------------
Outcome enumeration() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto shubert = enumerate_minima("shubert", 2000, 0.1, 1e-3);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(shubert.minima.size() == 18, "shubert found " + std::to_string(shubert.minima.size()) + " minima");
  for (const auto& m : shubert.minima)
    o.require(std::abs(m.value + 186.7309) <= 1e-3, "shubert minimum value " + num(m.value));
  o.require(secs < 60.0, "shubert runtime " + num(secs) + " s");

  const auto six = enumerate_minima("six_hump", 500, 0.05, 1e-4);
  o.require(six.minima.size() == 2, "six_hump found " + std::to_string(six.minima.size()) + " minima");

  const auto ym = enumerate_minima("yang_multi", 500, 0.1, 1e-4);
  o.require(ym.minima.size() == 4, "yang_multi found " + std::to_string(ym.minima.size()) + " minima");
  for (double sx : {0.5, -0.5})
    for (double sy : {0.5, -0.5}) {
      bool hit = false;
      for (const auto& m : ym.minima)
        hit = hit || (std::abs(m.point[0] - sx) <= 1e-3 && std::abs(m.point[1] - sy) <= 1e-3);
      o.require(hit, "yang_multi has no minimum within 1e-3 of (" + num(sx) + "," + num(sy) + ")");
    }
  return o;
}

// 3 -------------------------------------------------------------------------
Outcome gradients() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& spec : builtin_registry()) {
    if (!spec.has_analytic_gradient) continue;
    const std::size_t n = spec.dims.default_dim();
    const Objective f(spec, n, spec.params);
    Rng rng(0, 5);
    double worst = 0.0;
    int used = 0;
    while (used < 100) {
      Point x(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double pad = 0.01 * f.bounds().width(i);
        x[i] = rng.uniform(f.bounds().lower(i) + pad, f.bounds().upper(i) - pad);
      }
      if (is_singular_at(spec, x)) continue;
      worst = std::max(worst, relative_linf_error(fd_gradient(f, x), f.gradient(x)));
      ++used;
    }
    o.require(worst <= 1e-5, spec.id + ": relative error " + num(worst));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 5.0, "runtime " + num(secs) + " s");
  return o;
}

// 4 -------------------------------------------------------------------------
Outcome stationarity() {
  Outcome o;
  auto norm = [](const std::string& id, const Point& x) { return linf_norm(best_gradient(make_objective(id, x.size()), x)); };
  const std::vector<std::pair<std::string, Point>> exact{
      {"rosenbrock", {1, 1, 1}}, {"sphere", {0, 0, 0}},   {"hyper_ellipsoid", {0, 0, 0}}, {"sum_powers", {0, 0, 0}},
      {"zakharov", {0, 0, 0}},   {"zakharov_general", {0, 0, 0}}, {"griewank", {0, 0, 0}}, {"rastrigin", {0, 0, 0}}};
  for (const auto& [id, x] : exact) {
    const double g = norm(id, x);
    o.require(g <= 1e-6, id + ": |grad| = " + num(g) + " > 1e-6");
  }
  const std::vector<std::pair<std::string, Point>> approx{{"six_hump", {0.0898, -0.7126}},
                                                          {"six_hump", {-0.0898, 0.7126}},
                                                          {"michalewicz", {2.20319, 1.57049}},
                                                          {"schwefel", {420.9687}},
                                                          {"schwefel", {420.9687, 420.9687}}};
  for (const auto& [id, x] : approx) {
    const double g = norm(id, x);
    o.require(g <= 1e-2, id + " at its printed point: |grad| = " + num(g) + " > 1e-2");
  }
  return o;
}

// 5 -------------------------------------------------------------------------
Outcome probe_dominance() {
  Outcome o;
  for (const auto& spec : builtin_registry()) {
    const std::size_t n = spec.dims.default_dim();
    const Objective f(spec, n, spec.params, 0);
    for (const auto& opt : f.optima()) {
      if (opt.kind != OptimumKind::unique || !opt.point) continue;
      const Point& x = *opt.point;
      const double fx = f(x);
      Rng rng(1, 11);
      double worst = 0.0;
      Point y(n);
      for (int k = 0; k < 1000; ++k) {
        for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + rng.uniform(-1e-3, 1e-3);
        clamp_to(f.bounds(), y);
        if (spec.constrained) y = project_to_sphere(y);
        worst = std::max(worst, fx - f(y));
      }
      o.require(worst <= 1e-9, spec.id + ": a probe improves f by " + num(worst));
    }
  }
  return o;
}

// 6 -------------------------------------------------------------------------
Outcome stochastic() {
  Outcome o;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (std::size_t n : {2u, 5u, 10u}) {
      Point x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / static_cast<double>(i + 1);
      const double v = make_objective("stochastic_singular", n, seed)(x);
      o.require(v == 0.0, "stochastic_singular seed " + std::to_string(seed) + " n=" + std::to_string(n) + ": " + num(v));
    }
    const auto f = make_objective("stochastic_grid", 2, seed);
    const double well = f(Point{pi, pi});
    o.require(well <= -5.0, "stochastic_grid seed " + std::to_string(seed) + ": f(pi,pi) = " + num(well));
    const double lo = grid_scan(f, 200).min();
    o.require(lo >= -105.0 && lo <= -5.0, "stochastic_grid seed " + std::to_string(seed) + ": grid min " + num(lo));
  }
  return o;
}

// 7 -------------------------------------------------------------------------
Outcome constrained() {
  Outcome o;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    TrialConfig cfg;
    cfg.function = "product_sphere";
    cfg.n = 2;
    cfg.seed = seed;
    cfg.budget = 20000;
    cfg.optimizer = OptimizerKind::differential_evolution;
    cfg.constraint_mode = ConstraintMode::projection;
    const auto r = run_trial(cfg);
    o.require(std::abs(r.best_value + 1.0) <= 1e-3, "DE seed " + std::to_string(seed) + ": " + num(r.best_value));
  }
  for (std::size_t n : {2u, 3u, 4u}) {
    Rng rng(n, 17);
    Point x(n);
    double best = 0.0;
    for (int k = 0; k < 1000000; ++k) {
      for (auto& v : x) v = rng.uniform();
      if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) continue;
      best = std::min(best, eval_product_sphere(project_to_sphere(x)));
    }
    o.require(best >= -1.0 - 1e-9, "feasible sample beats -1 at n=" + std::to_string(n) + ": " + num(best));
  }
  return o;
}

// 8 -------------------------------------------------------------------------
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome o;
  const std::string dir = std::string(TESTFN_TEST_TMPDIR) + "/acceptance_det";
  std::filesystem::create_directories(dir);
  struct Case {
    std::vector<std::string> args;  // "@" is replaced by the run directory
    std::vector<std::string> files;
  };
  const std::vector<Case> cases{
      {{"list", "--json", "@/registry.json"}, {"registry.json"}},
      {{"info", "stochastic_grid", "--seed", "8", "--noise-json", "@/noise.json"}, {"noise.json"}},
      {{"eval", "stochastic_grid", "--point", "3,3", "--seed", "8"}, {}},
      {{"grid", "stochastic_grid", "--res", "60", "--seed", "2", "--out", "@/grid.csv"}, {"grid.csv"}},
      {{"verify", "--id", "six_hump", "--json", "@/verify.json"}, {"verify.json"}},
      {{"--no-meta", "bench", "--fn", "ackley", "--opt", "de", "--n", "3", "--budget", "3000", "--seeds", "0..3",
        "--threads", "3", "--out", "@/de.jsonl"},
       {"de.jsonl", "de.csv"}},
      {{"--no-meta", "bench", "--fn", "rosenbrock", "--opt", "nm", "--n", "2", "--budget", "2000", "--seeds", "0..2",
        "--out", "@/nm.jsonl"},
       {"nm.jsonl", "nm.csv"}},
      {{"--no-meta", "bench", "--fn", "product_sphere", "--opt", "random", "--n", "3", "--budget", "500", "--seeds",
        "1..2", "--constraint-mode", "penalty", "--out", "@/rs.jsonl"},
       {"rs.jsonl", "rs.csv"}},
      {{"report", "--in", "@/de.jsonl", "--in", "@/nm.jsonl", "--out", "@/report.csv"}, {"report.csv"}},
  };
  for (const auto& c : cases) {
    std::vector<std::string> outputs[2];
    for (int run = 0; run < 2; ++run) {
      const std::string rundir = dir + "/run" + std::to_string(run);
      std::filesystem::create_directories(rundir);
      std::vector<std::string> args;
      for (auto a : c.args) {
        if (auto at = a.find('@'); at != std::string::npos) a.replace(at, 1, rundir);
        args.push_back(a);
      }
      std::ostringstream out, err;
      const int code = cli::run_cli(args, out, err);
      if (code != 0) o.require(false, c.args[0] + " exited " + std::to_string(code) + ": " + err.str());
      outputs[run].push_back(out.str());
      for (const auto& f : c.files) outputs[run].push_back(slurp(rundir + "/" + f));
    }
    const std::string name = c.args[0] == "--no-meta" ? c.args[1] + " " + c.args[3] : c.args[0];
    o.require(outputs[0] == outputs[1], name + ": outputs differ between identical invocations");
  }
  return o;
}

// 9 -------------------------------------------------------------------------
Outcome smoke() {
  Outcome o;
  auto cfg = [](std::string fn, std::size_t n, OptimizerKind k, std::size_t budget, std::uint64_t seed) {
    TrialConfig c;
    c.function = std::move(fn);
    c.n = n;
    c.optimizer = k;
    c.budget = budget;
    c.seed = seed;
    return c;
  };
  const auto sphere = run_trial(cfg("sphere", 10, OptimizerKind::differential_evolution, 100000, 0));
  o.require(sphere.best_value < 1e-6, "DE sphere n=10: " + num(sphere.best_value));
  int hits = 0;
  std::string values;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const double v = run_trial(cfg("ackley", 5, OptimizerKind::differential_evolution, 50000, seed)).best_value;
    if (v < 1e-2) ++hits;
    values += " " + num(v);
  }
  o.require(hits >= 9, "DE ackley n=5 hit " + std::to_string(hits) + "/10:" + values);
  auto nm = cfg("rosenbrock", 2, OptimizerKind::nelder_mead, 10000, 0);
  nm.start = Point{0, 0};
  const auto r = run_trial(nm);
  o.require(r.best_value < 1e-8, "NM rosenbrock: " + num(r.best_value));
  return o;
}

// 10 ------------------------------------------------------------------------
Outcome suite_gate() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const int code = cli::run_cli({"verify"}, out, err);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(code == 0, "verify exited " + std::to_string(code));
  if (code != 0) {
    std::istringstream lines(out.str());
    for (std::string l; std::getline(lines, l);)
      if (l.find("FAIL") != std::string::npos || l.find("fail") != std::string::npos) o.notes.push_back(l);
  }
  o.require(secs < 120.0, "runtime " + num(secs) + " s");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1  optimum values at registered points", optimum_values},
      {"AC2  multi-minima enumeration (shubert 18, six_hump 2, yang_multi 4)", enumeration},
      {"AC3  analytic vs central-difference gradients", gradients},
      {"AC4  stationarity at exact and printed optima", stationarity},
      {"AC5  local-probe dominance at unique optima", probe_dominance},
      {"AC6  stochastic function contracts over 20 seeds", stochastic},
      {"AC7  constrained problem: DE projection and feasible sampling", constrained},
      {"AC8  byte-identical CLI output with --no-meta", determinism},
      {"AC9  optimizer smoke tests", smoke},
      {"AC10 verify passes for every function", suite_gate},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %s  (%.2f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs);
    for (const auto& note : o.notes) std::printf("      %s\n", note.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed;
}
