#pragma once

/// Moments mu_k(t) = ∫_0^1 x^k w(x;t) dx, optionally with shifted exponents,
/// by two independent routes:
///
///  * direct tanh-sinh quadrature on (0,1);
///  * the Kummer closed form e^{-t} Γ(1+b) U(1+b, -a, t) with
///    a = alpha + d_alpha + k, b = beta + d_beta, where U is evaluated from
///    its Laplace-type integral U(a,b,z) = Γ(a)^{-1} ∫_0^∞ e^{-zs} s^{a-1}
///    (1+s)^{b-a-1} ds on the half line.
///
/// At t = 0 the Beta closed form Γ(a+1)Γ(b+1)/Γ(a+b+2) is exact and used
/// as the table value.

#include "pjlab/quadrature.hpp"
#include "pjlab/weight.hpp"

#include <span>
#include <sstream>
#include <vector>

namespace pjlab {

/// Exponent shift: the integrand carries x^{alpha + d_alpha}(1-x)^{beta + d_beta}.
/// d_alpha = -1 serves 1/x kernels, d_beta = -1 serves 1/(1-x) kernels.
struct MomentShift {
  int d_alpha = 0;
  int d_beta = 0;
  friend bool operator==(const MomentShift&, const MomentShift&) = default;
};

inline std::string to_string(const MomentShift& s) {
  std::ostringstream os;
  os << '(' << s.d_alpha << ',' << s.d_beta << ')';
  return os.str();
}

struct MomentTable {
  WeightParams params;
  MomentShift shift;
  std::vector<Real> mu;      ///< mu[k], k = 0..k_max
  std::vector<Real> bounds;  ///< error bound of mu[k]
  /// |route A - route B| per entry when cross-checked (Kummer vs quadrature
  /// for t > 0, quadrature vs Beta form at t = 0); empty otherwise.
  std::vector<Real> route_agreement;
  /// Sum of both routes' error bounds, parallel to route_agreement.
  std::vector<Real> combined_bounds;

  int k_max() const { return static_cast<int>(mu.size()) - 1; }
  const Real& operator[](int k) const { return mu.at(static_cast<std::size_t>(k)); }
};

namespace detail {

inline void check_convergent(const WeightParams& p, int k_min, const MomentShift& s) {
  if (k_min < -1) throw DomainError("moments are defined for k >= -1");
  if (!(p.beta + s.d_beta > -1)) throw DomainError("moment diverges at x = 1: beta + d_beta <= -1");
  if (p.t == 0 && !(p.alpha + s.d_alpha + k_min > -1))
    throw DomainError("moment diverges at x = 0 for t = 0: alpha + d_alpha + k <= -1");
}

}  // namespace detail

/// Quadrature moments for several shifts and k = 0..k_max in one pass over
/// a shared node set.  Result component (s, k) sits at index s*(k_max+1)+k.
inline QuadVectorResult moments_quad_family(const WeightParams& p, std::span<const MomentShift> shifts, int k_max,
                                            const PrecisionCtx& ctx) {
  p.validate();
  for (const auto& s : shifts) detail::check_convergent(p, 0, s);
  PrecisionScope scope(ctx.working_bits);
  const std::size_t row = static_cast<std::size_t>(k_max) + 1;
  auto integrand = [&](const Real& x, const Real& xc, std::span<Real> out) {
    for (std::size_t s = 0; s < shifts.size(); ++s) {
      Real v = weight_with_complement(p, x, xc, shifts[s].d_alpha, shifts[s].d_beta);
      for (std::size_t k = 0; k < row; ++k) {
        out[s * row + k] = v;
        v *= x;
      }
    }
  };
  return de_quad_vec(integrand, shifts.size() * row, Interval::unit, ctx);
}

/// ∫_0^1 x^{k + d_alpha} e^{-t/x} x^alpha (1-x)^{beta + d_beta} dx by quadrature.
inline QuadResult moment_quad(const WeightParams& p, int k, const MomentShift& shift, const PrecisionCtx& ctx) {
  p.validate();
  detail::check_convergent(p, k, shift);
  PrecisionScope scope(ctx.working_bits);
  return de_quad(
      [&](const Real& x, const Real& xc) {
        return weight_with_complement(p, x, xc, shift.d_alpha, shift.d_beta) * boost::multiprecision::pow(x, k);
      },
      Interval::unit, ctx);
}

/// U(a, b - k, z) for k = 0..count-1 from the Laplace integral; requires
/// a > 0 and z > 0.
inline QuadVectorResult kummer_u_family(const Real& a, const Real& b, const Real& z, int count,
                                        const PrecisionCtx& ctx) {
  if (!(a > 0)) throw DomainError("Kummer U integral representation needs a > 0");
  if (!(z > 0)) throw DomainError("Kummer U integral representation needs z > 0");
  PrecisionScope scope(ctx.working_bits);
  using boost::multiprecision::exp;
  using boost::multiprecision::pow;
  auto integrand = [&](const Real& s, const Real& one_plus_s, std::span<Real> out) {
    Real v = exp(-z * s) * pow(s, a - 1) * pow(one_plus_s, b - a - 1);
    for (int k = 0; k < count; ++k) {
      out[static_cast<std::size_t>(k)] = v;
      v /= one_plus_s;
    }
  };
  QuadVectorResult r = de_quad_vec(integrand, static_cast<std::size_t>(count), Interval::half_line, ctx);
  const Real gamma_a = boost::multiprecision::tgamma(a);
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    r.values[k] /= gamma_a;
    r.error_bounds[k] /= gamma_a;
  }
  return r;
}

inline QuadResult kummer_u(const Real& a, const Real& b, const Real& z, const PrecisionCtx& ctx) {
  auto r = kummer_u_family(a, b, z, 1, ctx);
  return {r.values[0], r.error_bounds[0], r.evaluations};
}

/// e^{-t} Γ(1+b) U(1+b, -a - k, t) for k = 0..k_max, a = alpha + d_alpha,
/// b = beta + d_beta.
inline QuadVectorResult moments_kummer_family(const WeightParams& p, const MomentShift& shift, int k_max,
                                              const PrecisionCtx& ctx) {
  p.validate();
  if (!(p.t > 0)) throw DomainError("Kummer route requires t > 0; use the Beta closed form at t = 0");
  detail::check_convergent(p, 0, shift);
  PrecisionScope scope(ctx.working_bits);
  const Real b = p.beta + shift.d_beta;
  const Real a = p.alpha + shift.d_alpha;
  QuadVectorResult u = kummer_u_family(1 + b, -a, p.t, k_max + 1, ctx);
  const Real pref = boost::multiprecision::exp(-p.t) * boost::multiprecision::tgamma(1 + b);
  const Real eps = ctx.epsilon();
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    u.values[k] *= pref;
    u.error_bounds[k] = u.error_bounds[k] * pref + 16 * eps * boost::multiprecision::abs(u.values[k]);
  }
  return u;
}

inline QuadResult moment_kummer(const WeightParams& p, int k, const PrecisionCtx& ctx,
                                const MomentShift& shift = {}) {
  if (k < 0) throw DomainError("moment_kummer requires k >= 0");
  auto fam = moments_kummer_family(p, shift, k, ctx);
  return {fam.values.back(), fam.error_bounds.back(), fam.evaluations};
}

/// Beta closed form at t = 0: Γ(a+1)Γ(b+1)/Γ(a+b+2), a = alpha+d_alpha+k,
/// b = beta+d_beta, for k = 0..k_max (log-Gamma for k = 0, exact ratios after).
inline std::vector<Real> beta_moments(const WeightParams& p, const MomentShift& shift, int k_max,
                                      const PrecisionCtx& ctx) {
  detail::check_convergent(p.at_t(0), 0, shift);
  PrecisionScope scope(ctx.working_bits);
  using boost::multiprecision::exp;
  using boost::multiprecision::lgamma;
  const Real a = p.alpha + shift.d_alpha;
  const Real b = p.beta + shift.d_beta;
  std::vector<Real> mu(static_cast<std::size_t>(k_max) + 1);
  mu[0] = exp(lgamma(a + 1) + lgamma(b + 1) - lgamma(a + b + 2));
  for (int k = 1; k <= k_max; ++k) mu[k] = mu[k - 1] * (a + k) / (a + b + k + 1);
  return mu;
}

/// Moment tables for each requested shift, k = 0..k_max.  With
/// `cross_check`, every entry is compared across the two routes and a
/// disagreement beyond the combined error bounds raises PrecisionError.
inline std::vector<MomentTable> moment_table(const WeightParams& p, int k_max, std::span<const MomentShift> shifts,
                                             const PrecisionCtx& ctx, bool cross_check = true) {
  p.validate();
  if (k_max < 0) throw DomainError("moment_table: k_max must be >= 0");
  PrecisionScope scope(ctx.working_bits);
  const Real eps = ctx.epsilon();
  const std::size_t row = static_cast<std::size_t>(k_max) + 1;
  std::vector<MomentTable> tables(shifts.size());

  const bool need_quad = p.t > 0 || cross_check;
  QuadVectorResult quad;
  if (need_quad) quad = moments_quad_family(p, shifts, k_max, ctx);

  for (std::size_t s = 0; s < shifts.size(); ++s) {
    MomentTable& tab = tables[s];
    tab.params = p;
    tab.shift = shifts[s];
    tab.mu.resize(row);
    tab.bounds.resize(row);
    std::vector<Real> other, other_bounds;
    if (p.t == 0) {
      other = beta_moments(p, shifts[s], k_max, ctx);
      for (std::size_t k = 0; k < row; ++k) {
        tab.mu[k] = other[k];
        tab.bounds[k] = 4 * (k + 2) * eps * other[k];
      }
      other_bounds = tab.bounds;
    } else {
      for (std::size_t k = 0; k < row; ++k) {
        tab.mu[k] = quad.values[s * row + k];
        tab.bounds[k] = quad.error_bounds[s * row + k];
      }
      if (cross_check) {
        auto kum = moments_kummer_family(p, shifts[s], k_max, ctx);
        other = std::move(kum.values);
        other_bounds = std::move(kum.error_bounds);
      }
    }
    if (!cross_check) continue;
    tab.route_agreement.resize(row);
    tab.combined_bounds.resize(row);
    for (std::size_t k = 0; k < row; ++k) {
      const Real& q = quad.values[s * row + k];
      const Real& qb = quad.error_bounds[s * row + k];
      tab.route_agreement[k] = boost::multiprecision::abs(q - other[k]);
      tab.combined_bounds[k] = qb + other_bounds[k];
      if (tab.route_agreement[k] > tab.combined_bounds[k]) {
        std::ostringstream msg;
        msg << "moment routes disagree beyond their error bounds at k = " << k << ", shift " << to_string(shifts[s]);
        throw PrecisionError(msg.str());
      }
    }
  }
  return tables;
}

}  // namespace pjlab
