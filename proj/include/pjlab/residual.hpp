#pragma once

/// Normalized residuals.
///
/// `Tracked<V>` carries a value together with the magnitude of everything
/// that went into it: sums add magnitudes, products multiply them, and a
/// quotient propagates the relative magnitude of both operands.  For an
/// identity written as lhs - rhs the residual is |value| / (magnitude +
/// floor), i.e. the cancellation relative to the size of the terms.

#include "pjlab/numeric.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pjlab {

template <class V>
struct Tracked {
  V v;
  Real m;

  Tracked() : v(0), m(0) {}
  Tracked(const V& value) : v(value), m(abs_of(value)) {}  // NOLINT(google-explicit-constructor)
  Tracked(int value) : v(value), m(abs_of(V(value))) {}    // NOLINT(google-explicit-constructor)
  Tracked(V value, Real magnitude) : v(std::move(value)), m(std::move(magnitude)) {}

  static Real abs_of(const Real& x) { return boost::multiprecision::abs(x); }
  static Real abs_of(const Complex& z) { return abs(z); }

  friend Tracked operator+(const Tracked& a, const Tracked& b) { return {a.v + b.v, a.m + b.m}; }
  friend Tracked operator-(const Tracked& a, const Tracked& b) { return {a.v - b.v, a.m + b.m}; }
  friend Tracked operator-(const Tracked& a) { return {-a.v, a.m}; }
  friend Tracked operator*(const Tracked& a, const Tracked& b) { return {a.v * b.v, a.m * b.m}; }
  friend Tracked operator/(const Tracked& a, const Tracked& b) {
    const Real den = abs_of(b.v);
    V q = a.v / b.v;
    Real mag = (a.m + abs_of(q) * b.m) / den;
    return {std::move(q), std::move(mag)};
  }
  Tracked& operator+=(const Tracked& o) { return *this = *this + o; }
  Tracked& operator-=(const Tracked& o) { return *this = *this - o; }
};

using TR = Tracked<Real>;
using TC = Tracked<Complex>;

inline TC to_complex(const TR& x) { return {Complex(x.v), x.m}; }

/// 10^{-bits/2}: keeps 0/0 out of the normalized residual.
inline Real residual_floor(unsigned bits) {
  PrecisionScope scope(bits);
  return pow10_real(-static_cast<int>(bits / 2));
}

template <class V>
Real normalized(const Tracked<V>& diff, const Real& floor) {
  return Tracked<V>::abs_of(diff.v) / (diff.m + floor);
}

enum class Status { pass, fail, inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::inconclusive:
      return "inconclusive";
  }
  return "?";
}

struct ResidualReport {
  std::string identity;
  std::string suite;
  std::string tol_class;
  Real alpha;
  Real beta;
  int n = 0;
  Real t;
  std::optional<Complex> z;
  Real residual;
  Real tolerance;
  Status status = Status::fail;
  std::string notes;
};

/// Sort key: identity, then n, then t, then (alpha, beta).
inline bool report_order(const ResidualReport& a, const ResidualReport& b) {
  if (a.identity != b.identity) return a.identity < b.identity;
  if (a.n != b.n) return a.n < b.n;
  if (a.t != b.t) return a.t < b.t;
  if (a.alpha != b.alpha) return a.alpha < b.alpha;
  return a.beta < b.beta;
}

/// Named tolerance classes.  Values are doubles; the precision-dependent
/// `hankel` class defaults to 10^{-bits/4} unless set explicitly.
class Tolerances {
 public:
  static const std::vector<std::pair<std::string, double>>& defaults() {
    static const std::vector<std::pair<std::string, double>> d{
        {"algebraic", 1e-40},     // stencil-free identities on pipeline values
        {"discrete", 1e-35},      // recurrence formulas and the difference equation in n
        {"kummer", 1e-35},        // pipeline vs U-function ratios
        {"quadrature", 1e-40},    // direct-quadrature oracles
        {"t0", 1e-30},            // t = 0 closed forms, relative
        {"classical", 1e-3},      // large-n limits at t = 0, absolute
        {"stencil1", 1e-15},      // one numerical t-derivative
        {"toda", 1e-15},          // cap; the report tolerance is min(cap, normalized fd proxy)
        {"riccati", 1e-18},       // first-order equation in R_n
        {"two_ode", 1e-12},       // second-order factor in R_n
        {"stencil2", 1e-10},      // second numerical t-derivative
        {"route", 1.0},           // |route A - route B| / combined bound
        {"convergence", 0.5},     // |measured order - 4|
        {"asymptotic", 4.0},      // max/min ratio of a rescaled remainder
        {"continuity", 1e-2},     // small-t approach to t = 0 values
        {"p3", 1e-3},             // PIII residual at the largest beta
        {"p3_decay", 0.5},        // residual ratio between consecutive beta
        {"nonvanishing", 1e3},    // 1/|factor| of a factor that must stay away from zero
        {"property", 0.5},        // 0/1 indicator checks
    };
    return d;
  }

  static bool known(const std::string& cls) {
    if (cls == "hankel") return true;
    for (const auto& [k, v] : defaults())
      if (k == cls) return true;
    return false;
  }

  static std::vector<std::string> class_names() {
    std::vector<std::string> out{"hankel"};
    for (const auto& [k, v] : defaults()) out.push_back(k);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// "all" overrides every class.
  void set(const std::string& cls, double value) {
    if (!(value > 0) || !std::isfinite(value)) throw ConfigError("tolerance for '" + cls + "' must be a positive number");
    if (cls == "all") {
      all_ = value;
      return;
    }
    if (!known(cls)) throw ConfigError("unknown tolerance class '" + cls + "'");
    overrides_[cls] = value;
  }

  /// Tolerance at the current precision.
  Real get(const std::string& cls, unsigned bits) const {
    PrecisionScope scope(bits);
    if (all_) return Real(*all_);
    if (auto it = overrides_.find(cls); it != overrides_.end()) return Real(it->second);
    if (cls == "hankel") return pow10_real(-static_cast<int>(bits / 4));
    for (const auto& [k, v] : defaults())
      if (k == cls) return Real(v);
    throw ConfigError("unknown tolerance class '" + cls + "'");
  }

  const std::map<std::string, double>& overrides() const { return overrides_; }
  std::optional<double> all() const { return all_; }

 private:
  std::map<std::string, double> overrides_;
  std::optional<double> all_;
};

}  // namespace pjlab
