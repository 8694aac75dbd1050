#pragma once

/// The deformed Jacobi weight w(x; t) = e^{-t/x} x^alpha (1-x)^beta on [0,1]
/// and its potential v = -ln w.

#include "pjlab/numeric.hpp"

#include <string>

namespace pjlab {

struct WeightParams {
  Real alpha;
  Real beta;
  Real t;

  void validate() const {
    if (!(alpha > 0)) throw DomainError("weight parameter alpha must be > 0");
    if (!(beta > 0)) throw DomainError("weight parameter beta must be > 0");
    if (!(t >= 0)) throw DomainError("deformation parameter t must be >= 0");
  }

  WeightParams at_t(const Real& new_t) const { return {alpha, beta, new_t}; }

  /// 2n + alpha + beta, the recurring normaliser.
  Real c(int n) const { return 2 * n + alpha + beta; }
};

/// Parses decimal strings exactly at the current precision.
inline WeightParams make_params(const std::string& alpha, const std::string& beta, const std::string& t) {
  WeightParams p{Real(alpha), Real(beta), Real(t)};
  p.validate();
  return p;
}

/// w(x) given both x and 1 - x (the complement keeps (1-x)^beta accurate
/// near x = 1).  Exponent shifts d_alpha, d_beta are applied to the powers.
inline Real weight_with_complement(const WeightParams& p, const Real& x, const Real& xc, int d_alpha = 0,
                                   int d_beta = 0) {
  using boost::multiprecision::exp;
  using boost::multiprecision::pow;
  Real v = pow(x, p.alpha + d_alpha) * pow(xc, p.beta + d_beta);
  if (p.t != 0) v *= exp(-p.t / x);
  return v;
}

inline Real weight_eval(const WeightParams& p, const Real& x) {
  if (!(x > 0 && x < 1)) throw DomainError("weight_eval: x must lie in (0,1)");
  return weight_with_complement(p, x, Real(1 - x));
}

/// v'(z) = -t/z^2 - alpha/z - beta/(z-1).
inline Complex v_prime_eval(const WeightParams& p, const Complex& z) {
  if ((z.re == 0 && z.im == 0) || (z.re == 1 && z.im == 0)) throw DomainError("v'(z) has poles at z = 0 and z = 1");
  const Complex zm1 = z - Complex(1);
  return Complex(-p.t) / (z * z) - Complex(p.alpha) / z - Complex(p.beta) / zm1;
}

/// (v'(z) - v'(y)) / (z - y) in partial-fraction form:
/// t/(z^2 y) + (alpha y + t)/(z y^2) + beta/((z-1)(y-1)).
inline Complex v_prime_divided_difference(const WeightParams& p, const Complex& z, const Real& y) {
  const Complex zm1 = z - Complex(1);
  return Complex(p.t / y) / (z * z) + Complex((p.alpha * y + p.t) / (y * y)) / z +
         Complex(p.beta / (y - 1)) / zm1;
}

}  // namespace pjlab
