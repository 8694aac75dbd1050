#pragma once

/// Central-difference derivatives in the deformation parameter t.
///
/// Stencils are five points t + k h, k = -2..2, with h = t * fd_step_scale.
/// Each estimate comes with an error proxy: the gap between the 3-point and
/// 5-point formulas, which is dominated by the O(h^2) error of the former.

#include "pjlab/numeric.hpp"

#include <array>
#include <span>

namespace pjlab {

struct FdEstimate {
  Real value;
  Real error_proxy;
};

/// Five abscissae centred at t.  Index 2 is t itself.
struct Stencil {
  Real t;
  Real h;

  static Stencil around(const Real& t, const PrecisionCtx& ctx) {
    PrecisionScope scope(ctx.working_bits);
    if (!(t > 0)) throw DomainError("t-stencil requires t > 0");
    Stencil s{t, t * ctx.fd_step_scale()};
    if (!(t - 2 * s.h > 0)) throw DomainError("t-stencil would cross t <= 0");
    return s;
  }

  Real point(int k) const { return t + h * k; }
};

/// Derivative of order 1 or 2 from samples g(t + k h), k = -2..2.
inline FdEstimate stencil_derivative(std::span<const Real, 5> g, const Real& h, int order) {
  FdEstimate e;
  if (order == 1) {
    e.value = (g[0] - 8 * g[1] + 8 * g[3] - g[4]) / (12 * h);
    const Real three = (g[3] - g[1]) / (2 * h);
    e.error_proxy = boost::multiprecision::abs(e.value - three);
  } else if (order == 2) {
    const Real h2 = h * h;
    e.value = (-g[0] + 16 * g[1] - 30 * g[2] + 16 * g[3] - g[4]) / (12 * h2);
    const Real three = (g[1] - 2 * g[2] + g[3]) / h2;
    e.error_proxy = boost::multiprecision::abs(e.value - three);
  } else {
    throw DomainError("stencil derivative order must be 1 or 2");
  }
  return e;
}

/// g'(t) or g''(t) by a 5-point central stencil.
template <class G>
FdEstimate fd_derivative(G&& g, const Real& t, int order, const PrecisionCtx& ctx) {
  const Stencil s = Stencil::around(t, ctx);
  PrecisionScope scope(ctx.working_bits);
  std::array<Real, 5> samples;
  for (int k = -2; k <= 2; ++k) samples[k + 2] = g(s.point(k));
  return stencil_derivative(std::span<const Real, 5>(samples), s.h, order);
}

}  // namespace pjlab
