// Command-line front end. run_cli() is the whole program; tools/testfn.cpp
// only forwards argv to it so tests can drive every subcommand in-process.
//
// Exit codes: 0 success, 1 verification or validation failure, 2 usage error.
#pragma once

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "testfn/calculus.hpp"
#include "testfn/harness.hpp"
#include "testfn/io.hpp"
#include "testfn/registry.hpp"

namespace testfn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline int exit_code_for(const Error& e) {
  return (e.code() == Errc::parse_error || e.code() == Errc::invalid_argument) ? kExitUsage : kExitFailure;
}

/// "v1,v2,..." -> point.
inline Point parse_point(std::string_view text) {
  Point out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    auto token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    out.push_back(detail::parse_double(token, "--point"));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// Inclusive "a..b" (or a single "a") -> seeds a, a+1, ..., b.
inline std::vector<std::uint64_t> parse_seed_range(std::string_view text) {
  auto parse_u64 = [](std::string_view t) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
      throw Error(Errc::parse_error, "bad seed '" + std::string(t) + "'");
    return v;
  };
  const auto dots = text.find("..");
  const std::uint64_t a = parse_u64(dots == std::string_view::npos ? text : text.substr(0, dots));
  const std::uint64_t b = dots == std::string_view::npos ? a : parse_u64(text.substr(dots + 2));
  if (b < a) throw Error(Errc::parse_error, "seed range end is below its start");
  if (b - a >= 1000000) throw Error(Errc::parse_error, "seed range is too large");
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = a;; ++s) {
    seeds.push_back(s);
    if (s == b) break;
  }
  return seeds;
}

namespace detail {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

inline std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::io_error, "cannot open '" + path + "' for writing");
  return f;
}

/// Resolves the dimension: fixed functions reject --n, scalable ones fall
/// back to `fallback` (or fail when `required`).
inline std::size_t resolve_dim(const FunctionSpec& spec, std::optional<std::size_t> n, std::size_t fallback,
                               bool required) {
  if (spec.dims.kind == Dimensionality::Kind::fixed) {
    if (n) throw Error(Errc::invalid_argument, spec.id + " has fixed dimension " + spec.dims.describe() + "; drop --n");
    return spec.dims.n;
  }
  if (!n) {
    if (required) throw Error(Errc::invalid_argument, spec.id + " is scalable; pass --n");
    return fallback;
  }
  return *n;
}

inline Params resolve_params(const FunctionSpec& spec, const std::vector<std::string>& overrides) {
  Params p = spec.params;
  for (const auto& o : overrides) set_param(spec, p, o);
  return p;
}

inline void print_report_lines(std::ostream& out, const VerificationReport& r) {
  out << (r.ok() ? "PASS " : "FAIL ") << r.id << " (n=" << r.n << ")";
  if (r.optima.empty()) out << " no registered optimum at this dimension";
  out << '\n';
  for (std::size_t k = 0; k < r.optima.size(); ++k) {
    const auto& o = r.optima[k];
    auto line = [&](const char* name, const Check& c) {
      out << "  optimum " << k << ' ' << name << ": " << to_string(c.status);
      if (c.status != Check::Status::skipped)
        out << " (observed " << format_short(c.observed) << ", limit " << format_short(c.threshold) << ")";
      else if (!c.detail.empty())
        out << " (" << c.detail << ")";
      out << '\n';
    };
    line("value", o.value);
    line("stationarity", o.stationarity);
    line("probe", o.probe);
  }
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string replace_extension(const std::string& path, const std::string& ext) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
  return path.substr(0, dot) + ext;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

inline int cmd_list(detail::Streams io, const std::string& json_path) {
  const auto& registry = builtin_registry();
  for (const auto& spec : registry) {
    const std::size_t n = spec.dims.default_dim();
    const Bounds box = spec.bounds(n, spec.params);
    std::string bounds;
    if (box.is_uniform()) {
      bounds = "[" + format_short(box.lower(0)) + ", " + format_short(box.upper(0)) + "]";
      if (spec.id == "perm1") bounds = "[-n, n]";
    } else {
      for (std::size_t i = 0; i < n; ++i)
        bounds += (i ? " x " : "") + std::string("[") + format_short(box.lower(i)) + ", " +
                  format_short(box.upper(i)) + "]";
    }
    io.out << spec.id << "  dims=" << spec.dims.describe() << "  bounds=" << bounds << "  " << spec.optimum_summary
           << '\n';
  }
  if (!json_path.empty()) {
    auto f = detail::open_output(json_path);
    f << registry_to_json(registry).dump(2) << '\n';
  }
  return kExitOk;
}

inline int cmd_info(detail::Streams io, const std::string& id, std::optional<std::size_t> n_opt,
                    const std::vector<std::string>& overrides, std::uint64_t seed, const std::string& noise_path) {
  const auto& spec = lookup(id);
  const std::size_t n = detail::resolve_dim(spec, n_opt, spec.dims.default_dim(), false);
  const Params params = detail::resolve_params(spec, overrides);
  const Objective f(spec, n, params, seed);
  json j = spec_to_json(spec);
  j["title"] = spec.title;
  j["smooth"] = spec.smooth;
  j["has_analytic_gradient"] = spec.has_analytic_gradient;
  j["stochastic"] = spec.stochastic;
  j["constrained"] = spec.constrained;
  j["evaluated_at"] = {{"n", n}, {"params", params_to_json(spec, params)}};
  json optima = json::array();
  for (const auto& opt : f.optima()) optima.push_back(optimum_to_json(opt));
  j["evaluated_at"]["optima"] = std::move(optima);
  io.out << j.dump(2) << '\n';
  if (!noise_path.empty()) {
    if (!f.noise()) throw Error(Errc::invalid_argument, spec.id + " is deterministic; it has no noise tables");
    auto out = detail::open_output(noise_path);
    out << noise_to_json(*f.noise()).dump(2) << '\n';
  }
  return kExitOk;
}

inline int cmd_eval(detail::Streams io, const std::string& id, const std::string& point_text,
                    std::optional<std::size_t> n_opt, std::uint64_t seed, const std::vector<std::string>& overrides) {
  const auto& spec = lookup(id);
  const Point x = parse_point(point_text);
  if (spec.dims.kind == Dimensionality::Kind::fixed && n_opt)
    throw Error(Errc::invalid_argument, spec.id + " has fixed dimension " + spec.dims.describe() + "; drop --n");
  const std::size_t n = n_opt.value_or(x.size());
  if (x.size() != n || !spec.dims.accepts(n))
    throw Error(Errc::dimension_mismatch, spec.id + " expects a point of dimension " +
                                              (n_opt ? std::to_string(n) : spec.dims.describe()) + ", got " +
                                              std::to_string(x.size()) + " coordinates");
  const Objective f(spec, n, detail::resolve_params(spec, overrides), seed);
  const double v = f(x);
  if (!contains(f.bounds(), x)) io.err << "warning: point lies outside the search domain of " << spec.id << '\n';
  io.out << format_exact(v) << '\n';
  return kExitOk;
}

inline int cmd_grid(detail::Streams io, const std::string& id, std::size_t res, const std::string& out_path,
                    std::uint64_t seed, const std::vector<std::string>& overrides) {
  const auto& spec = lookup(id);
  if (!spec.dims.accepts(2)) throw Error(Errc::dimension_mismatch, spec.id + " cannot be evaluated at n=2");
  const Objective f(spec, 2, detail::resolve_params(spec, overrides), seed);
  const auto scan = grid_scan(f, res);
  {
    auto file = detail::open_output(out_path);
    write_grid_csv(file, scan);
  }
  const auto best = scan.point_at(scan.argmin());
  io.out << spec.id << " grid " << res << "x" << res << ": min " << format_short(scan.min()) << " at ("
         << format_short(best[0]) << ", " << format_short(best[1]) << "), max " << format_short(scan.max()) << '\n';
  return kExitOk;
}

inline int cmd_verify(detail::Streams io, const std::string& id, const std::string& json_path,
                      std::optional<std::size_t> n_opt, std::uint64_t seed, const std::vector<std::string>& overrides) {
  std::vector<VerificationReport> reports;
  if (!id.empty()) {
    const auto& spec = lookup(id);
    const std::size_t n = detail::resolve_dim(spec, n_opt, spec.dims.default_dim(), false);
    reports.push_back(verify_known_optima(Objective(spec, n, detail::resolve_params(spec, overrides), seed)));
  } else {
    if (n_opt || !overrides.empty())
      throw Error(Errc::invalid_argument, "--n and --param need --id");
    for (const auto& spec : builtin_registry())
      reports.push_back(verify_known_optima(Objective(spec, spec.dims.default_dim(), spec.params, seed)));
  }
  bool all_ok = true;
  for (const auto& r : reports) {
    detail::print_report_lines(io.out, r);
    all_ok = all_ok && r.ok();
  }
  if (!json_path.empty()) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    auto f = detail::open_output(json_path);
    f << arr.dump(2) << '\n';
  }
  io.out << (all_ok ? "all checks passed" : "verification failed") << " (" << reports.size() << " functions)\n";
  return all_ok ? kExitOk : kExitFailure;
}

struct BenchOptions {
  std::string function;
  std::string optimizer = "de";
  std::optional<std::size_t> n;
  std::size_t budget = 0;
  std::string seeds = "0..0";
  std::optional<std::string> constraint_mode;
  std::optional<double> penalty_lambda;
  std::vector<std::string> params;
  std::vector<std::string> hyperparameters;
  std::string out_path = "bench.jsonl";
  std::string csv_path;
  std::size_t threads = 1;
  bool no_meta = false;
};

inline int cmd_bench(detail::Streams io, const BenchOptions& opt) {
  const auto& spec = lookup(opt.function);
  const std::size_t n = detail::resolve_dim(spec, opt.n, 2, true);
  if (opt.budget < 1) throw Error(Errc::invalid_argument, "--budget must be >= 1");

  TrialConfig base;
  base.function = spec.id;
  base.n = n;
  base.budget = opt.budget;
  base.optimizer = parse_optimizer(opt.optimizer);
  base.params = opt.params;
  if (opt.penalty_lambda) base.params.push_back("penalty_lambda=" + format_exact(*opt.penalty_lambda));
  if (opt.constraint_mode) base.constraint_mode = parse_constraint_mode(*opt.constraint_mode);
  for (const auto& kv : opt.hyperparameters) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(Errc::parse_error, "--hp expects key=value");
    base.hyperparameters[kv.substr(0, eq)] = testfn::detail::parse_double(kv.substr(eq + 1), "--hp");
  }

  std::vector<TrialConfig> configs;
  for (auto seed : parse_seed_range(opt.seeds)) {
    TrialConfig c = base;
    c.seed = seed;
    configs.push_back(std::move(c));
  }
  // All configs are checked before any trial runs.
  for (const auto& c : configs) validate(c);

  const auto entries = run_suite(configs, opt.threads);
  std::vector<RunRecord> records;
  for (const auto& e : entries) {
    if (!e.ok()) throw Error(Errc::invalid_argument, "trial failed: " + e.error);
    records.push_back(*e.record);
  }

  {
    auto jsonl = detail::open_output(opt.out_path);
    if (!opt.no_meta) {
      json wall = json::array();
      for (const auto& r : records) wall.push_back(r.wall_time_s);
      json meta = {{"_meta", {{"tool", "testfn"}, {"created_utc", detail::utc_timestamp()}, {"wall_time_s", wall}}}};
      jsonl << meta.dump() << '\n';
    }
    for (const auto& r : records) jsonl << record_to_json(r).dump() << '\n';
  }
  {
    const std::string csv_path = opt.csv_path.empty() ? detail::replace_extension(opt.out_path, ".csv") : opt.csv_path;
    auto csv = detail::open_output(csv_path);
    write_summary_csv(csv, records);
  }

  io.out << "function  optimizer  seed  best_value  evals\n";
  for (const auto& r : records)
    io.out << r.config.function << "  " << to_string(r.config.optimizer) << "  " << r.config.seed << "  "
           << format_short(r.best_value) << "  " << r.evals << '\n';
  return kExitOk;
}

inline int cmd_report(detail::Streams io, const std::vector<std::string>& inputs, const std::string& out_path) {
  std::vector<RecordSummary> all;
  for (const auto& path : inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read '" + path + "'");
    auto part = read_records(in, path);
    all.insert(all.end(), part.begin(), part.end());
  }
  const auto rows = aggregate(all);
  {
    auto out = detail::open_output(out_path);
    write_aggregate_csv(out, rows);
  }
  io.out << "function  optimizer  runs  median  best  worst  mean_evals\n";
  for (const auto& a : rows)
    io.out << a.function << "  " << a.optimizer << "  " << a.runs << "  " << format_short(a.median) << "  "
           << format_short(a.best) << "  " << format_short(a.worst) << "  " << format_short(a.mean_evals) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Benchmark test functions for optimization: evaluate, verify, scan and benchmark."};
  app.name("testfn");
  app.require_subcommand(1, 1);
  bool no_meta = false;
  app.add_flag("--no-meta", no_meta, "Omit the timestamped metadata line from JSON-lines output");
  app.fallthrough();

  std::string list_json;
  auto* list = app.add_subcommand("list", "One line per registered function");
  list->add_option("--json", list_json, "Also write the registry as JSON");

  std::string info_id, info_noise;
  std::optional<std::size_t> info_n;
  std::vector<std::string> info_params;
  std::uint64_t info_seed = 0;
  auto* info = app.add_subcommand("info", "Registry entry of one function as JSON");
  info->add_option("id", info_id)->required();
  info->add_option("--n", info_n, "Dimension for scalable functions");
  info->add_option("--param", info_params, "Parameter override key=value (repeatable)");
  info->add_option("--seed", info_seed, "Noise seed for stochastic functions");
  info->add_option("--noise-json", info_noise, "Write the noise realization tables as JSON");

  std::string eval_id, eval_point;
  std::optional<std::size_t> eval_n;
  std::vector<std::string> eval_params;
  std::uint64_t eval_seed = 0;
  auto* eval = app.add_subcommand("eval", "Evaluate a function at one point");
  eval->add_option("id", eval_id)->required();
  eval->add_option("--point", eval_point, "Comma-separated coordinates")->required();
  eval->add_option("--n", eval_n, "Expected dimension (scalable functions only)");
  eval->add_option("--seed", eval_seed, "Noise seed for stochastic functions");
  eval->add_option("--param", eval_params, "Parameter override key=value (repeatable)");

  std::string grid_id, grid_out;
  std::size_t grid_res = 0;
  std::uint64_t grid_seed = 0;
  std::vector<std::string> grid_params;
  auto* grid = app.add_subcommand("grid", "Write a 2-D landscape scan as CSV");
  grid->add_option("id", grid_id)->required();
  grid->add_option("--res", grid_res, "Lattice points per axis")->required();
  grid->add_option("--out", grid_out, "CSV output path")->required();
  grid->add_option("--seed", grid_seed, "Noise seed for stochastic functions");
  grid->add_option("--param", grid_params, "Parameter override key=value (repeatable)");

  std::string verify_id, verify_json;
  std::optional<std::size_t> verify_n;
  std::uint64_t verify_seed = 0;
  std::vector<std::string> verify_params;
  auto* verify = app.add_subcommand("verify", "Check registered optima; exit 0 iff every check passes");
  verify->add_option("--id", verify_id, "Verify one function instead of all");
  verify->add_option("--json", verify_json, "Write the reports as JSON");
  verify->add_option("--n", verify_n, "Dimension (with --id)");
  verify->add_option("--seed", verify_seed, "Noise seed for stochastic functions");
  verify->add_option("--param", verify_params, "Parameter override key=value (with --id)");

  BenchOptions bench_opt;
  auto* bench = app.add_subcommand("bench", "Run an optimizer over a range of seeds");
  bench->add_option("--fn", bench_opt.function, "Function id")->required();
  bench->add_option("--opt", bench_opt.optimizer, "random | nm | de")->required();
  bench->add_option("--n", bench_opt.n, "Dimension (required for scalable functions)");
  bench->add_option("--budget", bench_opt.budget, "Objective evaluations per trial")->required();
  bench->add_option("--seeds", bench_opt.seeds, "Inclusive seed range a..b")->required();
  bench->add_option("--constraint-mode", bench_opt.constraint_mode, "projection | penalty (product_sphere)");
  bench->add_option("--penalty-lambda", bench_opt.penalty_lambda, "Quadratic penalty weight");
  bench->add_option("--param", bench_opt.params, "Parameter override key=value (repeatable)");
  bench->add_option("--hp", bench_opt.hyperparameters, "Optimizer hyperparameter key=value (repeatable)");
  bench->add_option("--out", bench_opt.out_path, "JSON-lines output path");
  bench->add_option("--csv", bench_opt.csv_path, "Summary CSV path (default: --out with .csv)");
  bench->add_option("--threads", bench_opt.threads, "Trials run concurrently");

  std::vector<std::string> report_in;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Aggregate JSON-lines records into a CSV");
  report->add_option("--in", report_in, "JSON-lines inputs")->required();
  report->add_option("--out", report_out, "Aggregated CSV path")->required();

  std::vector<std::string> storage{"testfn"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const detail::Streams io{out, err};
  try {
    if (list->parsed()) return cmd_list(io, list_json);
    if (info->parsed()) return cmd_info(io, info_id, info_n, info_params, info_seed, info_noise);
    if (eval->parsed()) return cmd_eval(io, eval_id, eval_point, eval_n, eval_seed, eval_params);
    if (grid->parsed()) return cmd_grid(io, grid_id, grid_res, grid_out, grid_seed, grid_params);
    if (verify->parsed()) return cmd_verify(io, verify_id, verify_json, verify_n, verify_seed, verify_params);
    if (bench->parsed()) {
      bench_opt.no_meta = no_meta;
      return cmd_bench(io, bench_opt);
    }
    if (report->parsed()) return cmd_report(io, report_in, report_out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitUsage;
}

}  // namespace testfn::cli
