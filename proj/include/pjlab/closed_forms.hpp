#pragma once

/// Closed forms the pipeline is compared against: the t = 0 values of the
/// recurrence coefficients and auxiliaries, and the n = 0 values as ratios
/// of Kummer U functions.

#include "pjlab/moments.hpp"

namespace pjlab {

/// alpha_n(0) = [2n^2 + 2n(a+b+1) + (1+a)(a+b)] / [(2n+a+b)(2n+a+b+2)]
inline Real t0_alpha(const WeightParams& p, int n) {
  const Real c = p.c(n);
  return (2 * n * n + 2 * n * (p.alpha + p.beta + 1) + (1 + p.alpha) * (p.alpha + p.beta)) / (c * (c + 2));
}

/// beta_n(0) = n(n+a)[n^2 + (a+2b)n + b(a+b)] / [(2n+a+b)^2 ((2n+a+b)^2 - 1)]
inline Real t0_beta(const WeightParams& p, int n) {
  const Real c = p.c(n);
  return n * (n + p.alpha) * (n * n + (p.alpha + 2 * p.beta) * n + p.beta * (p.alpha + p.beta)) / (c * c * (c * c - 1));
}

inline Real t0_R(const WeightParams& p, int n) { return p.c(n) + 1; }

inline Real t0_r(const WeightParams& p, int n) { return n * (n + p.alpha) / p.c(n); }

struct KummerRatios {
  Real alpha0;  ///< U(1+b, -a-1, t) / U(1+b, -a, t)
  Real R0;      ///< U(b, -a, t) / U(1+b, -a, t)
  Real alpha0_bound;
  Real R0_bound;
};

inline KummerRatios kummer_n0(const WeightParams& p, const PrecisionCtx& ctx) {
  p.validate();
  if (!(p.t > 0)) throw DomainError("Kummer ratios need t > 0");
  PrecisionScope scope(ctx.working_bits);
  // U(1+b, -a - k, t), k = 0, 1
  QuadVectorResult u1 = kummer_u_family(1 + p.beta, -p.alpha, p.t, 2, ctx);
  QuadResult u0 = kummer_u(p.beta, -p.alpha, p.t, ctx);
  KummerRatios k;
  k.alpha0 = u1.values[1] / u1.values[0];
  k.R0 = u0.value / u1.values[0];
  k.alpha0_bound = abs(k.alpha0) * (u1.error_bounds[1] / abs(u1.values[1]) + u1.error_bounds[0] / abs(u1.values[0]));
  k.R0_bound = abs(k.R0) * (u0.error_bound / abs(u0.value) + u1.error_bounds[0] / abs(u1.values[0]));
  return k;
}

/// R_0(t)/t - 1 - (alpha + 2 beta + 2)/t, the remainder of the large-t
/// expansion of R_0; O(1/t^2).
inline Real r0_large_t_remainder(const WeightParams& p, const Real& R0) {
  return R0 / p.t - 1 - (p.alpha + 2 * p.beta + 2) / p.t;
}

}  // namespace pjlab
