// Domain types shared by every module: points, bounds, parameters, optimum
// claims, errors and the reproducible random stream.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace testfn {

using Point = std::vector<double>;
using PointView = std::span<const double>;

enum class Errc {
  unknown_id,
  empty_point,
  dimension_mismatch,
  invalid_argument,
  singular_point,
  unsupported_function,
  zero_vector,
  too_close_to_boundary,
  parse_error,
  io_error,
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::unknown_id: return "unknown-id";
    case Errc::empty_point: return "empty-point";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::singular_point: return "singular-point";
    case Errc::unsupported_function: return "unsupported-function";
    case Errc::zero_vector: return "zero-vector";
    case Errc::too_close_to_boundary: return "too-close-to-boundary";
    case Errc::parse_error: return "parse-error";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

namespace detail {

inline void require_nonempty(PointView x) {
  if (x.empty()) throw Error(Errc::empty_point, "point has no coordinates");
}

inline void require_dim(PointView x, std::size_t n) {
  if (x.size() != n)
    throw Error(Errc::dimension_mismatch,
                "expected dimension " + std::to_string(n) + ", got " + std::to_string(x.size()));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Random stream
//
// xoshiro256** (Blackman & Vigna) with its state filled from splitmix64 of the
// 64-bit seed. Doubles take the top 53 bits: (next() >> 11) * 2^-53, giving
// values in [0, 1). Bounded integers use the multiply-high reduction
// (next() * k) >> 64. Independent streams derived from one seed are obtained
// by seeding splitmix64 with seed + stream * 0x9E3779B97F4A7C15.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t sm = seed + stream * 0x9E3779B97F4A7C15ULL;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, k).
  std::size_t below(std::size_t k) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(next()) * k) >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

// Stream ids used across the library so that noise, optimizer and probe draws
// from the same seed never coincide.
inline constexpr std::uint64_t kNoiseStream = 0;
inline constexpr std::uint64_t kOptimizerStream = 1;
inline constexpr std::uint64_t kProbeStream = 2;
inline constexpr std::uint64_t kStartStream = 3;

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

/// Closed box. A single stored interval broadcasts to every coordinate.
class Bounds {
 public:
  Bounds() = default;

  static Bounds uniform(double lower, double upper) {
    return Bounds(std::vector<double>{lower}, std::vector<double>{upper});
  }

  Bounds(std::vector<double> lower, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty() || lower_.size() != upper_.size())
      throw Error(Errc::invalid_argument, "bounds need matching non-empty lower/upper");
    for (std::size_t i = 0; i < lower_.size(); ++i)
      if (!(lower_[i] < upper_[i]))
        throw Error(Errc::invalid_argument, "bounds require lower < upper");
  }

  bool is_uniform() const { return lower_.size() == 1; }
  std::size_t stored_size() const { return lower_.size(); }

  double lower(std::size_t i) const { return is_uniform() ? lower_[0] : lower_.at(i); }
  double upper(std::size_t i) const { return is_uniform() ? upper_[0] : upper_.at(i); }
  double width(std::size_t i) const { return upper(i) - lower(i); }

  /// Explicit per-coordinate vectors for dimension n.
  std::vector<double> lower_vector(std::size_t n) const {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = lower(i);
    return v;
  }
  std::vector<double> upper_vector(std::size_t n) const {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = upper(i);
    return v;
  }

  /// A non-uniform box only describes points of its own dimension.
  bool fits_dimension(std::size_t n) const { return is_uniform() || lower_.size() == n; }

 private:
  std::vector<double> lower_{0.0};
  std::vector<double> upper_{1.0};
};

inline bool contains(const Bounds& bounds, PointView x) {
  if (!bounds.fits_dimension(x.size())) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] >= bounds.lower(i) && x[i] <= bounds.upper(i))) return false;
  return true;
}

inline void clamp_to(const Bounds& bounds, std::span<double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < bounds.lower(i)) x[i] = bounds.lower(i);
    if (x[i] > bounds.upper(i)) x[i] = bounds.upper(i);
  }
}

inline Point sample_uniform(const Bounds& bounds, std::size_t n, Rng& rng) {
  if (n < 1) throw Error(Errc::invalid_argument, "sample dimension must be >= 1");
  if (!bounds.fits_dimension(n)) throw Error(Errc::dimension_mismatch, "bounds do not fit dimension");
  Point x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(bounds.lower(i), bounds.upper(i));
  return x;
}

// ---------------------------------------------------------------------------
// Dimensionality, parameters, optimum claims
// ---------------------------------------------------------------------------

struct Dimensionality {
  enum class Kind { fixed, scalable };
  Kind kind = Kind::scalable;
  std::size_t n = 1;  // fixed n, or the minimum n when scalable

  static Dimensionality fixed(std::size_t n) { return {Kind::fixed, n}; }
  static Dimensionality scalable(std::size_t min_n) { return {Kind::scalable, min_n}; }

  bool accepts(std::size_t dim) const { return kind == Kind::fixed ? dim == n : dim >= n; }

  /// Dimension used when none is given: the fixed n, or 2 for scalable functions.
  std::size_t default_dim() const { return kind == Kind::fixed ? n : std::max<std::size_t>(2, n); }

  std::string describe() const {
    return kind == Kind::fixed ? std::to_string(n) : "n>=" + std::to_string(n);
  }
};

/// Standing-wave defect centre: the origin or (pi, ..., pi).
enum class Shift { origin, pi };

inline double shift_value(Shift s) { return s == Shift::pi ? std::numbers::pi : 0.0; }
inline const char* to_string(Shift s) { return s == Shift::pi ? "pi" : "origin"; }

/// Union of all tunable parameters; each function reads the fields it names
/// in FunctionSpec::param_keys.
struct Params {
  int m = 10;
  double beta = 1.0;
  double alpha = 1.0;
  int K = 10;
  Shift shift = Shift::origin;
  double penalty_lambda = 1e4;
  bool easom_literal_sign = false;
  bool perm1_literal = false;
};

enum class OptimumKind { unique, one_of_many, count, random_value };

inline const char* to_string(OptimumKind k) {
  switch (k) {
    case OptimumKind::unique: return "unique";
    case OptimumKind::one_of_many: return "one_of_many";
    case OptimumKind::count: return "count";
    case OptimumKind::random_value: return "random_value";
  }
  return "unknown";
}

/// Exact points are closed-form minimizers; approximate ones are printed to a
/// few decimals in the source literature.
enum class PointPrecision { exact, approximate };

struct KnownOptimum {
  std::optional<Point> point;
  double value = 0.0;
  double value_tolerance = 1e-9;
  double point_tolerance = 0.0;
  OptimumKind kind = OptimumKind::unique;
  std::size_t count = 1;  // number of global minima when kind == count
  std::optional<double> value_floor;  // random_value: lowest attainable minimum
  PointPrecision precision = PointPrecision::exact;
  std::string provenance;  // "literature" or "derived"
};

}  // namespace testfn
