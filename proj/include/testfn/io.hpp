// JSON and CSV forms of registry entries, scans, minima sets, verification
// reports, noise tables and run records.
#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "testfn/calculus.hpp"
#include "testfn/harness.hpp"
#include "testfn/registry.hpp"
#include "testfn/stochastic.hpp"

namespace testfn {

using json = nlohmann::ordered_json;

/// Round-trip precision for machine-readable output.
inline std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Six significant digits for human-readable summaries.
inline std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

inline json params_to_json(const FunctionSpec& spec, const Params& p) {
  json out = json::object();
  for (const auto& key : spec.param_keys) {
    if (key == "m") out["m"] = p.m;
    else if (key == "beta") out["beta"] = p.beta;
    else if (key == "alpha") out["alpha"] = p.alpha;
    else if (key == "K") out["K"] = p.K;
    else if (key == "shift") out["shift"] = to_string(p.shift);
    else if (key == "penalty_lambda") out["penalty_lambda"] = p.penalty_lambda;
    else if (key == "literal_sign") out["literal_sign"] = p.easom_literal_sign;
    else if (key == "literal") out["literal"] = p.perm1_literal;
  }
  return out;
}

inline std::string optimum_kind_label(const KnownOptimum& opt) {
  if (opt.kind == OptimumKind::count) return "count(" + std::to_string(opt.count) + ")";
  return to_string(opt.kind);
}

inline json optimum_to_json(const KnownOptimum& opt) {
  json o;
  if (opt.point) o["point"] = *opt.point;
  o["value"] = opt.value;
  o["kind"] = optimum_kind_label(opt);
  return o;
}

/// {name, dims, lower, upper, params, optima} at the function's default dimension.
inline json spec_to_json(const FunctionSpec& spec) {
  const std::size_t n = spec.dims.default_dim();
  const Bounds box = spec.bounds(n, spec.params);
  json o;
  o["name"] = spec.id;
  o["dims"] = {{"kind", spec.dims.kind == Dimensionality::Kind::fixed ? "fixed" : "scalable"}, {"n", spec.dims.n}};
  o["lower"] = box.lower_vector(n);
  o["upper"] = box.upper_vector(n);
  o["params"] = params_to_json(spec, spec.params);
  json optima = json::array();
  for (const auto& opt : spec.optima(n, spec.params)) optima.push_back(optimum_to_json(opt));
  o["optima"] = std::move(optima);
  return o;
}

inline json registry_to_json(const Registry& registry) {
  json arr = json::array();
  for (const auto& spec : registry) arr.push_back(spec_to_json(spec));
  return arr;
}

// ---------------------------------------------------------------------------
// Calculus artifacts
// ---------------------------------------------------------------------------

/// Header "x,y,f", one row per lattice point in row-major order.
inline void write_grid_csv(std::ostream& out, const GridScan& g) {
  out << "x,y,f\n";
  for (std::size_t row = 0; row < g.resolution; ++row)
    for (std::size_t col = 0; col < g.resolution; ++col)
      out << format_exact(g.x_at(col)) << ',' << format_exact(g.y_at(row)) << ',' << format_exact(g.at(row, col))
          << '\n';
}

inline json minima_to_json(const MinimaSet& set) {
  json o;
  o["dedup_radius"] = set.dedup_radius;
  o["value_band"] = set.value_band;
  o["starts"] = set.starts;
  json arr = json::array();
  for (const auto& m : set.minima) arr.push_back({{"point", m.point}, {"value", m.value}});
  o["minima"] = std::move(arr);
  return o;
}

inline json check_to_json(const Check& c) {
  json o;
  o["status"] = to_string(c.status);
  if (c.status != Check::Status::skipped) {
    o["observed"] = c.observed;
    o["threshold"] = c.threshold;
  }
  if (!c.detail.empty()) o["detail"] = c.detail;
  return o;
}

inline json report_to_json(const VerificationReport& r) {
  json o;
  o["id"] = r.id;
  o["n"] = r.n;
  o["seed"] = r.seed;
  o["pass"] = r.ok();
  json arr = json::array();
  for (const auto& opt : r.optima) {
    json e = optimum_to_json(opt.optimum);
    e["value_tolerance"] = opt.optimum.value_tolerance;
    if (opt.evaluated_point) e["evaluated_point"] = *opt.evaluated_point;
    e["evaluated_value"] = opt.evaluated_value;
    e["value_check"] = check_to_json(opt.value);
    e["stationarity"] = check_to_json(opt.stationarity);
    e["probe"] = check_to_json(opt.probe);
    arr.push_back(std::move(e));
  }
  o["optima"] = std::move(arr);
  return o;
}

inline json noise_to_json(const NoiseRealization& noise) {
  return {{"seed", noise.seed}, {"K", noise.K}, {"n", noise.n}, {"grid_eps", noise.grid_eps},
          {"vec_eps", noise.vec_eps}};
}

// ---------------------------------------------------------------------------
// Run records
// ---------------------------------------------------------------------------

/// One JSON-lines record. Wall time is left out so records are reproducible.
inline json record_to_json(const RunRecord& r) {
  const auto& spec = lookup(r.config.function);
  json o;
  o["function"] = r.config.function;
  o["n"] = r.config.n;
  o["seed"] = r.config.seed;
  o["budget"] = r.config.budget;
  o["optimizer"] = to_string(r.config.optimizer);
  o["constraint_mode"] = to_string(r.constraint_mode);
  o["params"] = params_to_json(spec, r.params);
  json hp = json::object();
  for (const auto& [k, v] : r.config.hyperparameters) hp[k] = v;
  o["hyperparameters"] = std::move(hp);
  o["evals"] = r.evals;
  o["best_value"] = r.best_value;
  o["best_point"] = r.best_point;
  json trace = json::array();
  for (const auto& t : r.trace) trace.push_back(json::array({t.evals, t.best}));
  o["trace"] = std::move(trace);
  return o;
}

inline void write_summary_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "function,optimizer,seed,best_value,evals\n";
  for (const auto& r : records)
    out << r.config.function << ',' << to_string(r.config.optimizer) << ',' << r.config.seed << ','
        << format_exact(r.best_value) << ',' << r.evals << '\n';
}

/// The fields of a record needed for aggregation.
struct RecordSummary {
  std::string function;
  std::string optimizer;
  std::uint64_t seed = 0;
  double best_value = 0.0;
  std::size_t evals = 0;
};

/// Reads JSON lines; blank lines and the "_meta" line are skipped. Any other
/// malformed line fails with its 1-based line number.
inline std::vector<RecordSummary> read_records(std::istream& in, const std::string& source = "input") {
  std::vector<RecordSummary> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = source + ":" + std::to_string(number);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(Errc::parse_error, where + ": malformed JSON (" + e.what() + ")");
    }
    if (j.is_object() && j.contains("_meta")) continue;
    try {
      RecordSummary r;
      r.function = j.at("function").get<std::string>();
      r.optimizer = j.at("optimizer").get<std::string>();
      r.seed = j.at("seed").get<std::uint64_t>();
      const auto& bv = j.at("best_value");
      r.best_value = bv.is_null() ? std::numeric_limits<double>::quiet_NaN() : bv.get<double>();
      r.evals = j.at("evals").get<std::size_t>();
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(Errc::parse_error, where + ": malformed record (" + e.what() + ")");
    }
  }
  return out;
}

struct Aggregate {
  std::string function;
  std::string optimizer;
  std::size_t runs = 0;
  double median = 0.0;
  double best = 0.0;
  double worst = 0.0;
  double mean_evals = 0.0;
};

/// Per (function, optimizer): median/best/worst of best_value and mean evals,
/// sorted by function then optimizer. Even counts average the middle pair.
inline std::vector<Aggregate> aggregate(const std::vector<RecordSummary>& records) {
  std::map<std::pair<std::string, std::string>, std::vector<const RecordSummary*>> groups;
  for (const auto& r : records) groups[{r.function, r.optimizer}].push_back(&r);
  std::vector<Aggregate> out;
  for (const auto& [key, members] : groups) {
    std::vector<double> values;
    double evals = 0.0;
    for (const auto* m : members) {
      values.push_back(m->best_value);
      evals += static_cast<double>(m->evals);
    }
    std::sort(values.begin(), values.end());
    const std::size_t k = values.size();
    Aggregate a;
    a.function = key.first;
    a.optimizer = key.second;
    a.runs = k;
    a.median = k % 2 == 1 ? values[k / 2] : 0.5 * (values[k / 2 - 1] + values[k / 2]);
    a.best = values.front();
    a.worst = values.back();
    a.mean_evals = evals / static_cast<double>(k);
    out.push_back(a);
  }
  return out;
}

inline void write_aggregate_csv(std::ostream& out, const std::vector<Aggregate>& rows) {
  out << "function,optimizer,runs,median_best_value,best_best_value,worst_best_value,mean_evals\n";
  for (const auto& a : rows)
    out << a.function << ',' << a.optimizer << ',' << a.runs << ',' << format_exact(a.median) << ','
        << format_exact(a.best) << ',' << format_exact(a.worst) << ',' << format_exact(a.mean_evals) << '\n';
}

}  // namespace testfn
