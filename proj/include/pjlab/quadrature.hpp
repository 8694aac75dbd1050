#pragma once

/// Double-exponential quadrature over (0,1) (tanh-sinh) and (0,∞) (exp-sinh).
///
/// Integrands receive the abscissa `x` together with a companion value `xc`
/// evaluated without cancellation: `1 - x` on the unit interval, `1 + x` on
/// the half line.  Vector integrands fill a span of component values at each
/// node so a whole family of integrals (all moments of a table, say) shares a
/// single node set.
///
/// Error control halves the step until successive levels differ by less than
/// the context's target times the L1 norm of each component.

#include "pjlab/numeric.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

namespace pjlab {

enum class Interval { unit, half_line };

struct QuadResult {
  Real value;
  Real error_bound;
  std::size_t evaluations = 0;
};

struct QuadVectorResult {
  std::vector<Real> values;
  std::vector<Real> error_bounds;
  std::size_t evaluations = 0;
  int levels = 0;
};

/// Raised when the level cap is hit; carries the best estimate reached.
class QuadratureError : public PrecisionError {
 public:
  QuadratureError(const std::string& what, QuadVectorResult best)
      : PrecisionError(what), best_(std::move(best)) {}
  const QuadVectorResult& best() const { return best_; }

 private:
  QuadVectorResult best_;
};

namespace detail {

struct Node {
  Real x;
  Real xc;
  Real jacobian;
};

inline Node de_node(const Real& u, Interval interval, const Real& half_pi) {
  using boost::multiprecision::cosh;
  using boost::multiprecision::exp;
  using boost::multiprecision::sinh;
  Node nd;
  if (interval == Interval::unit) {
    // x = 1 / (1 + e^{-v}),  1 - x = 1 / (1 + e^{v}),  v = pi sinh u
    const Real v = 2 * half_pi * sinh(u);
    if (v <= 0) {
      const Real ev = exp(v);
      nd.x = ev / (1 + ev);
      nd.xc = 1 / (1 + ev);
    } else {
      const Real emv = exp(-v);
      nd.x = 1 / (1 + emv);
      nd.xc = emv / (1 + emv);
    }
    nd.jacobian = 2 * half_pi * cosh(u) * nd.x * nd.xc;
  } else {
    nd.x = exp(half_pi * sinh(u));
    nd.xc = 1 + nd.x;
    nd.jacobian = half_pi * cosh(u) * nd.x;
  }
  return nd;
}

/// Abscissa magnitude |u| beyond which nodes are never needed: the
/// endpoint distance has dropped below 2^{-8 bits}.
inline double de_u_cap(Interval interval, unsigned bits) {
  const double reach = 8.0 * bits * 0.6931471805599453;
  const double scale = interval == Interval::unit ? 3.141592653589793 : 1.5707963267948966;
  return std::asinh(reach / scale);
}

}  // namespace detail

/// Integrates the m-component integrand `f(x, xc, out)` over `interval`.
template <class F>
QuadVectorResult de_quad_vec(F&& f, std::size_t m, Interval interval, const PrecisionCtx& ctx) {
  ctx.validate();
  PrecisionScope scope(ctx.working_bits);
  using boost::multiprecision::abs;

  const Real half_pi = pi() / 2;
  const Real target = ctx.quad_target();
  const Real eps = ctx.epsilon();
  // Terms smaller than this relative to a component's peak are dropped.
  const Real cut = eps * eps * eps;

  const Real h0 = Real(1) / 4;
  const int k_cap = static_cast<int>(std::ceil(detail::de_u_cap(interval, ctx.working_bits) / 0.25));

  std::vector<Real> buf(m);
  std::size_t evaluations = 0;

  auto eval_at = [&](const Real& u, std::vector<Real>& terms) {
    const detail::Node nd = detail::de_node(u, interval, half_pi);
    std::fill(buf.begin(), buf.end(), Real(0));
    if (nd.jacobian != 0 && nd.x != 0) f(nd.x, nd.xc, std::span<Real>(buf));
    ++evaluations;
    terms.resize(m);
    for (std::size_t j = 0; j < m; ++j) terms[j] = buf[j] * nd.jacobian;
  };

  // Level 0: coarse scan over the full abscissa range to find the window
  // outside which every component is negligible.
  std::vector<std::vector<Real>> coarse(2 * k_cap + 1);
  std::vector<Real> peak(m, Real(0));
  for (int k = -k_cap; k <= k_cap; ++k) {
    auto& terms = coarse[k + k_cap];
    eval_at(h0 * k, terms);
    for (std::size_t j = 0; j < m; ++j) {
      const Real a = abs(terms[j]);
      if (a > peak[j]) peak[j] = a;
    }
  }
  auto significant = [&](const std::vector<Real>& terms) {
    for (std::size_t j = 0; j < m; ++j)
      if (peak[j] != 0 && abs(terms[j]) > cut * peak[j]) return true;
    return false;
  };
  int k_lo = 0, k_hi = 0;
  for (int k = -k_cap; k <= k_cap; ++k)
    if (significant(coarse[k + k_cap])) {
      k_lo = k;
      break;
    }
  for (int k = k_cap; k >= -k_cap; --k)
    if (significant(coarse[k + k_cap])) {
      k_hi = k;
      break;
    }
  k_lo = std::max(k_lo - 1, -k_cap);
  k_hi = std::min(k_hi + 1, k_cap);

  std::vector<Real> sum(m, Real(0)), l1(m, Real(0));
  for (int k = k_lo; k <= k_hi; ++k)
    for (std::size_t j = 0; j < m; ++j) {
      sum[j] += coarse[k + k_cap][j];
      l1[j] += abs(coarse[k + k_cap][j]);
    }
  coarse.clear();

  QuadVectorResult res;
  res.values.resize(m);
  res.error_bounds.resize(m);
  for (std::size_t j = 0; j < m; ++j) res.values[j] = sum[j] * h0;

  const Real u_lo = h0 * k_lo, u_hi = h0 * k_hi;
  Real h = h0;
  std::vector<Real> terms;
  for (int level = 1; level <= ctx.max_quad_level; ++level) {
    h /= 2;
    // New nodes: odd multiples of h inside the window.
    const long long i_lo = static_cast<long long>(boost::multiprecision::floor(u_lo / h).convert_to<double>());
    const long long i_hi = static_cast<long long>(boost::multiprecision::ceil(u_hi / h).convert_to<double>());
    for (long long i = i_lo; i <= i_hi; ++i) {
      if ((i & 1) == 0) continue;
      const Real u = h * Real(i);
      if (u < u_lo || u > u_hi) continue;
      eval_at(u, terms);
      for (std::size_t j = 0; j < m; ++j) {
        sum[j] += terms[j];
        l1[j] += abs(terms[j]);
      }
    }
    bool converged = level >= 2;
    for (std::size_t j = 0; j < m; ++j) {
      const Real next = sum[j] * h;
      const Real diff = abs(next - res.values[j]);
      const Real norm = l1[j] * h;
      res.error_bounds[j] = diff + 64 * eps * norm;
      if (diff > target * norm) converged = false;
      res.values[j] = next;
    }
    res.levels = level;
    res.evaluations = evaluations;
    if (converged) return res;
  }
  std::ostringstream msg;
  msg << "double-exponential quadrature did not converge after " << ctx.max_quad_level
      << " step halvings at " << ctx.working_bits << " bits";
  throw QuadratureError(msg.str(), res);
}

/// Scalar convenience form: `f(x, xc) -> Real`.
template <class F>
QuadResult de_quad(F&& f, Interval interval, const PrecisionCtx& ctx) {
  auto vec = de_quad_vec([&](const Real& x, const Real& xc, std::span<Real> out) { out[0] = f(x, xc); }, 1,
                         interval, ctx);
  return {vec.values[0], vec.error_bounds[0], vec.evaluations};
}

}  // namespace pjlab
