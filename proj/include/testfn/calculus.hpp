// Numerical verification: finite differences, stationarity, landscape scans,
// multistart enumeration of global minima and optimum verification reports.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "testfn/constrained.hpp"
#include "testfn/core.hpp"
#include "testfn/optimizers.hpp"
#include "testfn/registry.hpp"

namespace testfn {

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

inline constexpr double kDefaultFdScale = 1e-6;

namespace detail {

inline double fd_step(double xi, double h_scale) { return h_scale * std::max(1.0, std::abs(xi)); }

inline void require_fd_interior(const Objective& f, PointView x, double h_scale) {
  const Bounds& box = f.bounds();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = fd_step(x[i], h_scale);
    if (x[i] - h < box.lower(i) || x[i] + h > box.upper(i))
      throw Error(Errc::too_close_to_boundary,
                  "coordinate " + std::to_string(i) + " is within one step of the bounds");
  }
}

}  // namespace detail

/// Central differences with per-coordinate step h_i = h_scale * max(1, |x_i|).
inline Point fd_gradient(const Objective& f, PointView x, double h_scale = kDefaultFdScale) {
  detail::require_dim(x, f.dim());
  detail::require_fd_interior(f, x, h_scale);
  Point g(x.size());
  Point probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = detail::fd_step(x[i], h_scale);
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

inline Point fd_gradient(std::string_view id, PointView x, double h_scale = kDefaultFdScale) {
  return fd_gradient(make_objective(id, x.size()), x, h_scale);
}

/// Central and one-sided estimates at two step sizes. A derivative that
/// exists makes all of them agree; a kink shows up as forward != backward.
struct FdDiagnostics {
  Point central;
  Point central_refined;  // step divided by 10
  Point forward;
  Point backward;
  bool converged = true;
};

inline FdDiagnostics fd_diagnose(const Objective& f, PointView x, double h_scale = kDefaultFdScale,
                                 double agreement = 1e-3) {
  FdDiagnostics d;
  d.central = fd_gradient(f, x, h_scale);
  d.central_refined = fd_gradient(f, x, h_scale / 10.0);
  const double f0 = f(x);
  d.forward.resize(x.size());
  d.backward.resize(x.size());
  Point probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = detail::fd_step(x[i], h_scale);
    probe[i] = x[i] + h;
    d.forward[i] = (f(probe) - f0) / h;
    probe[i] = x[i] - h;
    d.backward[i] = (f0 - f(probe)) / h;
    probe[i] = x[i];
    const double scale = std::max({1.0, std::abs(d.forward[i]), std::abs(d.backward[i])});
    if (std::abs(d.forward[i] - d.backward[i]) > agreement * scale ||
        std::abs(d.central[i] - d.central_refined[i]) > agreement * scale)
      d.converged = false;
  }
  return d;
}

/// max_i |a_i - b_i| / max(1, max_i |b_i|)
inline double relative_linf_error(PointView a, PointView b) {
  double diff = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(b[i]));
  }
  return diff / scale;
}

inline double linf_norm(PointView v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

inline bool is_singular_at(const FunctionSpec& spec, PointView x) {
  switch (spec.singularity) {
    case Singularity::none: return false;
    case Singularity::origin: return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
    case Singularity::zero_coordinate: return std::any_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
  }
  return false;
}

/// Gradient by closed form when available, central differences otherwise.
inline Point best_gradient(const Objective& f, PointView x) {
  if (is_singular_at(f.spec(), x))
    throw Error(Errc::singular_point, f.id() + " is not differentiable at this point");
  return f.has_gradient() ? f.gradient(x) : fd_gradient(f, x);
}

inline bool check_stationary(const Objective& f, PointView x, double tol) {
  return linf_norm(best_gradient(f, x)) <= tol;
}

inline bool check_stationary(std::string_view id, PointView x, double tol) {
  return check_stationary(make_objective(id, x.size()), x, tol);
}

// ---------------------------------------------------------------------------
// Grid scan
// ---------------------------------------------------------------------------

/// Values on a resolution x resolution lattice spanning the bounds. Rows run
/// over y, columns over x: values[row * resolution + col].
struct GridScan {
  std::string id;
  std::size_t resolution = 0;
  double x_lower = 0, x_upper = 0, y_lower = 0, y_upper = 0;
  std::vector<double> values;

  double x_at(std::size_t col) const {
    return x_lower + (x_upper - x_lower) * static_cast<double>(col) / static_cast<double>(resolution - 1);
  }
  double y_at(std::size_t row) const {
    return y_lower + (y_upper - y_lower) * static_cast<double>(row) / static_cast<double>(resolution - 1);
  }
  double at(std::size_t row, std::size_t col) const { return values[row * resolution + col]; }

  std::size_t argmin() const {
    return static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  }
  double min() const { return *std::min_element(values.begin(), values.end()); }
  double max() const { return *std::max_element(values.begin(), values.end()); }
  Point point_at(std::size_t index) const { return {x_at(index % resolution), y_at(index / resolution)}; }
};

inline GridScan grid_scan(const Objective& f, std::size_t resolution) {
  if (f.dim() != 2) throw Error(Errc::dimension_mismatch, "grid scans need a 2-dimensional objective");
  if (resolution < 2) throw Error(Errc::invalid_argument, "grid resolution must be >= 2");
  GridScan g;
  g.id = f.id();
  g.resolution = resolution;
  g.x_lower = f.bounds().lower(0);
  g.x_upper = f.bounds().upper(0);
  g.y_lower = f.bounds().lower(1);
  g.y_upper = f.bounds().upper(1);
  g.values.resize(resolution * resolution);
  Point p(2);
  for (std::size_t row = 0; row < resolution; ++row) {
    p[1] = g.y_at(row);
    for (std::size_t col = 0; col < resolution; ++col) {
      p[0] = g.x_at(col);
      g.values[row * resolution + col] = f(p);
    }
  }
  return g;
}

inline GridScan grid_scan(std::string_view id, std::size_t resolution, std::uint64_t seed = 0) {
  const auto& spec = lookup(id);
  if (!spec.dims.accepts(2)) throw Error(Errc::dimension_mismatch, spec.id + " cannot be evaluated at n=2");
  return grid_scan(Objective(spec, 2, spec.params, seed), resolution);
}

// ---------------------------------------------------------------------------
// Multistart enumeration
// ---------------------------------------------------------------------------

struct LocalMinimum {
  Point point;
  double value = 0.0;
};

struct MinimaSet {
  std::vector<LocalMinimum> minima;  // ascending by value
  double dedup_radius = 0.0;
  double value_band = 0.0;
  std::size_t starts = 0;
};

struct EnumerateOptions {
  std::size_t starts = 500;
  double dedup_radius = 0.1;
  double value_band = 1e-4;
  std::uint64_t seed = 0;
  std::size_t seed_grid_resolution = 400;  // lattice minima of this scan are used as starts first
  std::size_t local_budget = 2000;
  double local_edge = 0.01;
  double local_collapse = 1e-11;
};

namespace detail {

/// Lattice cells whose value does not exceed any of their 8 neighbours.
inline std::vector<std::pair<double, Point>> lattice_minima(const GridScan& g) {
  std::vector<std::pair<double, Point>> out;
  const auto r = static_cast<std::ptrdiff_t>(g.resolution);
  for (std::ptrdiff_t row = 0; row < r; ++row)
    for (std::ptrdiff_t col = 0; col < r; ++col) {
      const double v = g.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
      bool is_min = true;
      for (std::ptrdiff_t dr = -1; dr <= 1 && is_min; ++dr)
        for (std::ptrdiff_t dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const auto rr = row + dr, cc = col + dc;
          if (rr < 0 || cc < 0 || rr >= r || cc >= r) continue;
          if (g.at(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)) < v) {
            is_min = false;
            break;
          }
        }
      if (is_min) out.push_back({v, g.point_at(static_cast<std::size_t>(row * r + col))});
    }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/// Latin hypercube: one sample per stratum on every axis, strata shuffled.
inline std::vector<Point> latin_hypercube(const Bounds& box, std::size_t n, std::size_t count, Rng& rng) {
  std::vector<Point> pts(count, Point(n));
  std::vector<std::size_t> perm(count);
  for (std::size_t axis = 0; axis < n; ++axis) {
    for (std::size_t k = 0; k < count; ++k) perm[k] = k;
    for (std::size_t k = count; k > 1; --k) std::swap(perm[k - 1], perm[rng.below(k)]);
    for (std::size_t k = 0; k < count; ++k) {
      const double u = (static_cast<double>(perm[k]) + rng.uniform()) / static_cast<double>(count);
      pts[k][axis] = box.lower(axis) + u * box.width(axis);
    }
  }
  return pts;
}

inline double linf_distance(PointView a, PointView b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace detail

/// Runs a local Nelder-Mead descent from each start and keeps the distinct
/// minima whose value lies within `value_band` of the best one found.
inline MinimaSet enumerate_minima(const Objective& f, const EnumerateOptions& opt) {
  if (f.dim() != 2) throw Error(Errc::dimension_mismatch, "minimum enumeration needs a 2-dimensional objective");
  if (opt.starts < 1) throw Error(Errc::invalid_argument, "need at least one start");

  std::vector<Point> starts;
  if (opt.seed_grid_resolution >= 2) {
    for (auto& [value, point] : detail::lattice_minima(grid_scan(f, opt.seed_grid_resolution))) {
      if (starts.size() >= opt.starts) break;
      starts.push_back(std::move(point));
    }
  }
  if (starts.size() < opt.starts) {
    Rng rng(opt.seed, kStartStream);
    for (auto& p : detail::latin_hypercube(f.bounds(), 2, opt.starts - starts.size(), rng))
      starts.push_back(std::move(p));
  }

  Problem problem{2, f.bounds(), [&f](PointView x) { return f(x); }, {}};
  NelderMeadOptions nm;
  nm.initial_edge = opt.local_edge;
  nm.collapse_diameter = opt.local_collapse;
  nm.restart_on_collapse = false;

  // Results are keyed by start index, so the merge below is order-independent.
  std::vector<LocalMinimum> found;
  found.reserve(starts.size());
  for (const auto& s : starts) {
    auto r = nelder_mead(problem, opt.local_budget, s, nm);
    found.push_back({r.best_point, r.best_value});
  }
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.value < b.value; });

  MinimaSet out;
  out.dedup_radius = opt.dedup_radius;
  out.value_band = opt.value_band;
  out.starts = starts.size();
  if (found.empty()) return out;
  const double best = found.front().value;
  for (auto& candidate : found) {
    if (candidate.value > best + opt.value_band) break;
    const bool distinct = std::all_of(out.minima.begin(), out.minima.end(), [&](const LocalMinimum& kept) {
      return detail::linf_distance(kept.point, candidate.point) >= opt.dedup_radius;
    });
    if (distinct) out.minima.push_back(std::move(candidate));
  }
  return out;
}

inline MinimaSet enumerate_minima(std::string_view id, std::size_t starts, double dedup_radius, double value_band) {
  EnumerateOptions opt;
  opt.starts = starts;
  opt.dedup_radius = dedup_radius;
  opt.value_band = value_band;
  return enumerate_minima(make_objective(id, 2), opt);
}

// ---------------------------------------------------------------------------
// Optimum verification
// ---------------------------------------------------------------------------

struct Check {
  enum class Status { pass, fail, skipped };
  Status status = Status::skipped;
  double observed = 0.0;
  double threshold = 0.0;
  std::string detail;

  bool ok() const { return status != Status::fail; }
};

inline const char* to_string(Check::Status s) {
  switch (s) {
    case Check::Status::pass: return "pass";
    case Check::Status::fail: return "fail";
    case Check::Status::skipped: return "skipped";
  }
  return "unknown";
}

struct OptimumReport {
  KnownOptimum optimum;
  std::optional<Point> evaluated_point;  // the optimum point, or the located minimizer
  double evaluated_value = 0.0;
  Check value;
  Check stationarity;
  Check probe;

  bool ok() const { return value.ok() && stationarity.ok() && probe.ok(); }
};

struct VerificationReport {
  std::string id;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<OptimumReport> optima;

  bool ok() const {
    return std::all_of(optima.begin(), optima.end(), [](const OptimumReport& r) { return r.ok(); });
  }
};

inline constexpr std::size_t kProbeCount = 1000;
inline constexpr double kProbeRadius = 1e-3;
inline constexpr double kExactProbeSlack = 1e-9;
inline constexpr double kExactStationaryTol = 1e-6;
inline constexpr double kApproxStationaryTol = 1e-2;
inline constexpr std::size_t kSearchGridResolution = 400;

namespace detail {

inline std::string format_short_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline Check make_check(bool pass, double observed, double threshold, std::string text = {}) {
  return {pass ? Check::Status::pass : Check::Status::fail, observed, threshold, std::move(text)};
}

inline Check skipped(std::string reason) { return {Check::Status::skipped, 0.0, 0.0, std::move(reason)}; }

/// Locates the global minimum of a 2-D objective by lattice scan and local polish.
inline LocalMinimum locate_minimum_2d(const Objective& f) {
  const auto scan = grid_scan(f, kSearchGridResolution);
  Problem problem{2, f.bounds(), [&f](PointView x) { return f(x); }, {}};
  NelderMeadOptions nm;
  nm.initial_edge = 2.0 / static_cast<double>(kSearchGridResolution - 1);
  nm.collapse_diameter = 1e-12;
  nm.restart_on_collapse = false;
  auto r = nelder_mead(problem, 5000, scan.point_at(scan.argmin()), nm);
  return {r.best_point, r.best_value};
}

inline bool strictly_interior(const Bounds& box, PointView x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > box.lower(i) && x[i] < box.upper(i))) return false;
  return true;
}

/// Gradient norm at x; for the constrained problem only the component
/// tangent to the constraint sphere counts.
inline double stationarity_norm(const Objective& f, PointView x) {
  Point g = best_gradient(f, x);
  if (f.spec().constrained) {
    double norm2 = 0.0, dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      norm2 += x[i] * x[i];
      dot += g[i] * x[i];
    }
    for (std::size_t i = 0; i < x.size(); ++i) g[i] -= dot / norm2 * x[i];
  }
  return linf_norm(g);
}

/// Exact points must be stationary themselves. Approximate points must have
/// a stationary point within point_tolerance, found by a local polish.
inline Check stationarity_check(const Objective& f, const KnownOptimum& opt, PointView x) {
  const auto& spec = f.spec();
  if (!spec.smooth) return skipped("function is not smooth");
  if (is_singular_at(spec, x)) return skipped("not differentiable at the optimum; covered by the probe");
  if (!f.has_gradient() && !strictly_interior(f.bounds(), x)) return skipped("optimum on the boundary");
  try {
    if (opt.precision == PointPrecision::exact) {
      const double norm = stationarity_norm(f, x);
      return make_check(norm <= kExactStationaryTol, norm, kExactStationaryTol,
                        spec.constrained ? "tangential gradient" : "");
    }
    if (spec.constrained) return skipped("approximate point on a constraint");
    Problem problem{x.size(), f.bounds(), [&f](PointView p) { return f(p); }, {}};
    NelderMeadOptions nm;
    nm.initial_edge = std::max(opt.point_tolerance, 1e-6) / f.bounds().width(0);
    nm.collapse_diameter = 1e-13;
    nm.restart_on_collapse = false;
    const auto polished = nelder_mead(problem, 20000, Point(x.begin(), x.end()), nm);
    const double norm = stationarity_norm(f, polished.best_point);
    double dist = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dist = std::max(dist, std::abs(polished.best_point[i] - x[i]));
    const bool pass = norm <= kExactStationaryTol && dist <= opt.point_tolerance;
    return make_check(pass, dist, opt.point_tolerance,
                      "distance to the polished stationary point (gradient there " + format_short_value(norm) + ")");
  } catch (const Error& e) {
    return skipped(e.what());
  }
}

inline Check probe_check(const Objective& f, const KnownOptimum& opt, PointView x, double fx) {
  const double slack = opt.precision == PointPrecision::exact ? kExactProbeSlack : opt.value_tolerance;
  Rng rng(0, kProbeStream);
  double worst = -std::numeric_limits<double>::infinity();
  Point y(x.size());
  for (std::size_t k = 0; k < kProbeCount; ++k) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + rng.uniform(-kProbeRadius, kProbeRadius);
    clamp_to(f.bounds(), y);
    if (f.spec().constrained) y = project_to_sphere(y);
    worst = std::max(worst, fx - f(y));
  }
  return make_check(worst <= slack, worst, slack, "largest improvement over the optimum");
}

}  // namespace detail

inline VerificationReport verify_known_optima(const Objective& f) {
  VerificationReport report;
  report.id = f.id();
  report.n = f.dim();
  report.seed = f.seed();
  for (const auto& opt : f.optima()) {
    OptimumReport r;
    r.optimum = opt;
    if (!opt.point) {
      if (f.dim() != 2) {
        r.value = detail::skipped("no point given and search needs n=2");
      } else {
        auto located = detail::locate_minimum_2d(f);
        r.evaluated_point = located.point;
        r.evaluated_value = located.value;
        const double err = std::abs(located.value - opt.value);
        r.value = detail::make_check(err <= opt.value_tolerance, err, opt.value_tolerance, "located by search");
      }
      r.stationarity = detail::skipped("no point given");
      r.probe = detail::skipped("no point given");
      report.optima.push_back(std::move(r));
      continue;
    }

    const Point& x = *opt.point;
    r.evaluated_point = x;
    r.evaluated_value = f(x);
    if (opt.kind == OptimumKind::random_value) {
      const double floor = opt.value_floor.value_or(-std::numeric_limits<double>::infinity());
      const bool pass = r.evaluated_value <= opt.value && r.evaluated_value >= floor;
      r.value = detail::make_check(pass, r.evaluated_value, opt.value, "random minimum must lie in [floor, value]");
      r.stationarity = detail::skipped("random landscape");
      r.probe = detail::skipped("random landscape");
    } else {
      const double err = std::abs(r.evaluated_value - opt.value);
      r.value = detail::make_check(err <= opt.value_tolerance, err, opt.value_tolerance);
      r.stationarity = detail::stationarity_check(f, opt, x);
      r.probe = detail::probe_check(f, opt, x, r.evaluated_value);
    }
    report.optima.push_back(std::move(r));
  }
  return report;
}

inline VerificationReport verify_known_optima(std::string_view id, std::uint64_t seed = 0) {
  const auto& spec = lookup(id);
  return verify_known_optima(Objective(spec, spec.dims.default_dim(), spec.params, seed));
}

}  // namespace testfn
