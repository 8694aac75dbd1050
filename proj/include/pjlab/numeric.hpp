#pragma once

/// Arbitrary-precision scalar types, the precision context shared by every
/// numerical routine, and the library's exception hierarchy.
///
/// All arithmetic is carried out in `Real` (an MPFR-backed float).  Its
/// precision is a process-wide default that `PrecisionScope` installs and
/// restores; every public entry point that accepts a `PrecisionCtx` opens a
/// scope, so callers only need to pass the context around.

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <ios>
#include <stdexcept>
#include <string>
#include <utility>

namespace pjlab {

using Real = boost::multiprecision::mpfr_float;

// ---------------------------------------------------------------------------
// Errors

/// Input outside the mathematical domain of an operation (a pole, x ∉ (0,1)).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Working precision is insufficient (loss of positive definiteness, a
/// quadrature that does not reach its target).  Retry with more bits.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration supplied by a user.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Precision

/// Decimal digits handed to Boost so that the MPFR mantissa holds at least
/// `bits` binary digits.
inline unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

/// Binary precision of the current default.
inline unsigned current_bits() {
  Real probe;
  return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

/// RAII guard: sets the default precision for newly created `Real`s and
/// restores the previous default on exit.  The default is process-wide in
/// Boost; an unchanged value is never written, so worker threads running
/// at the precision already set do not touch it.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits) : saved_(Real::default_precision()) {
    const unsigned d = digits10_for_bits(bits);
    if (d != saved_) Real::default_precision(d);
  }
  ~PrecisionScope() {
    if (Real::default_precision() != saved_) Real::default_precision(saved_);
  }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

/// Numerical configuration shared by quadrature, stencils and the pipeline.
struct PrecisionCtx {
  unsigned working_bits = 256;
  /// Quadrature goal, relative to the L1 norm of the integrand.
  double quad_target_log2 = -236;
  /// Relative stencil step h = t * fd_step_scale, as log2.
  double fd_step_scale_log2 = -64;
  /// Cap on step halvings in the double-exponential quadrature.
  int max_quad_level = 12;

  static PrecisionCtx with_bits(unsigned bits) {
    if (bits < 64) throw ConfigError("working_bits must be at least 64");
    PrecisionCtx ctx;
    ctx.working_bits = bits;
    ctx.quad_target_log2 = -static_cast<double>(bits) + 20;
    ctx.fd_step_scale_log2 = -static_cast<double>(bits) / 4;
    return ctx;
  }

  /// Working precision sized for polynomial degree `n_max`:
  /// max(192, 64 + 24 n_max) bits.
  static PrecisionCtx for_degree(int n_max) {
    const unsigned bits = std::max(192u, 64u + 24u * static_cast<unsigned>(std::max(n_max, 0)));
    return with_bits(bits);
  }

  PrecisionCtx with_fd_step_scale(double scale) const {
    if (!(scale > 0 && scale < 1)) throw ConfigError("fd_step_scale must lie in (0,1)");
    PrecisionCtx c = *this;
    c.fd_step_scale_log2 = std::log2(scale);
    return c;
  }

  void validate() const {
    if (working_bits < 64) throw ConfigError("working_bits must be at least 64");
    if (!(fd_step_scale_log2 < 0)) throw ConfigError("fd_step_scale must lie in (0,1)");
    if (max_quad_level < 1) throw ConfigError("max_quad_level must be positive");
  }

  Real quad_target() const {
    PrecisionScope scope(working_bits);
    return exp2_real(quad_target_log2);
  }
  Real fd_step_scale() const {
    PrecisionScope scope(working_bits);
    return exp2_real(fd_step_scale_log2);
  }
  /// Relative rounding unit 2^-bits.
  Real epsilon() const {
    PrecisionScope scope(working_bits);
    return exp2_real(-static_cast<double>(working_bits));
  }

 private:
  static Real exp2_real(double e) {
    Real two = 2;
    return boost::multiprecision::pow(two, Real(e));
  }
};

// ---------------------------------------------------------------------------
// Constants and helpers

inline Real pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

/// Copies `x` into a value carrying the *current* default precision (plain
/// assignment would keep the precision of the source).
inline Real rebind(const Real& x) {
  Real r;
  mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
  return r;
}

inline Real pow10_real(int e) {
  Real ten = 10;
  return boost::multiprecision::pow(ten, e);
}

/// Decimal scientific notation with a fixed number of significant digits.
/// Locale independent (MPFR formats the digits).
inline std::string format_sci(const Real& x, int digits) {
  // Boost counts the digits after the point
  return x.str(std::max(digits, 1) - 1, std::ios_base::scientific);
}

// ---------------------------------------------------------------------------
// Complex

/// Minimal complex number over `Real`.  std::complex is unspecified for
/// non-builtin scalars, so the handful of operations needed live here.
struct Complex {
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(Real r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(int r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    const Real den = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / den;
    im = (im * o.re - re * o.im) / den;
    re = std::move(r);
    return *this;
  }
  Complex operator-() const { return {-re, -im}; }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator*(Complex a, const Real& s) {
    a.re *= s;
    a.im *= s;
    return a;
  }
  friend Complex operator*(const Real& s, Complex a) { return a * s; }
  friend Complex operator/(Complex a, const Real& s) {
    a.re /= s;
    a.im /= s;
    return a;
  }
};

inline Real abs(const Complex& z) { return boost::multiprecision::hypot(z.re, z.im); }
inline Complex conj(const Complex& z) { return {z.re, -z.im}; }

}  // namespace pjlab
