#pragma once

/// Auxiliary quantities of the ladder-operator coefficients
///
///   A_n(z) = R*_n / z^2 + R_n / z - R_n / (z-1)
///   B_n(z) = r*_n / z^2 - (n - r_n) / z - r_n / (z-1)
///
/// with
///   R*_n = (t / h_n)     ∫ P_n^2 w dy/y
///   R_n  = (beta / h_n)  ∫ P_n^2 w dy/(1-y)
///   r*_n = (t / h_{n-1}) ∫ P_{n-1} P_n w dy/y
///   r_n  = (beta / h_{n-1}) ∫ P_{n-1} P_n w dy/(1-y)
///
/// Each integral is a contraction of monomial coefficients against a shifted
/// moment table: shift (-1,0) supplies the 1/y kernel and (0,-1) the
/// 1/(1-y) kernel.  At t = 0 the t-weighted quantities are exactly zero.

#include "pjlab/ortho.hpp"

#include <optional>
#include <span>
#include <vector>

namespace pjlab {

inline constexpr MomentShift kPlainShift{0, 0};
inline constexpr MomentShift kInverseXShift{-1, 0};
inline constexpr MomentShift kInverseComplementShift{0, -1};

struct AuxSet {
  WeightParams params;
  int n_max = 0;
  std::vector<Real> R;      ///< n = 0..n_max
  std::vector<Real> Rstar;  ///< n = 0..n_max
  std::vector<Real> r;      ///< n = 0..n_max, r[0] = 0
  std::vector<Real> rstar;  ///< n = 0..n_max, rstar[0] = 0
  std::vector<Real> H;      ///< H_n = -sum_{j<n} R*_j, n = 0..n_max+1
  std::vector<Real> Htil;   ///< H_n - n(n+alpha+beta), n = 0..n_max+1
  std::vector<Real> Hprime; ///< -n + (2n+alpha+beta) r*_n / t, n = 0..n_max; empty at t = 0
  std::vector<Real> S;      ///< R_n / (2n+1+alpha+beta), n = 0..n_max
};

namespace detail {

/// sum_{i,j} a_i b_j m_{i+j}
inline Real bilinear_contract(std::span<const Real> a, std::span<const Real> b, const MomentTable& m) {
  Real total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Real inner = 0;
    for (std::size_t j = 0; j < b.size(); ++j) inner += b[j] * m[static_cast<int>(i + j)];
    total += a[i] * inner;
  }
  return total;
}

inline const MomentTable* find_table(std::span<const MomentTable> tables, const MomentShift& s) {
  for (const auto& t : tables)
    if (t.shift == s) return &t;
  return nullptr;
}

}  // namespace detail

/// R*_n, R_n, r*_n, r_n for a single n.
struct AuxRow {
  Real R, Rstar, r, rstar;
};

inline AuxRow aux_compute(const OrthoSystem& sys, std::span<const MomentTable> tables, int n, const PrecisionCtx& ctx) {
  if (n < 0 || n > sys.n_max) throw DomainError("aux_compute: n outside the built system");
  PrecisionScope scope(ctx.working_bits);
  const WeightParams& p = sys.params;
  const MomentTable* nu = detail::find_table(tables, kInverseComplementShift);
  if (!nu) throw DomainError("aux_compute needs the (0,-1) moment table");
  if (nu->k_max() < 2 * n) throw DomainError("aux_compute: (0,-1) table too short");
  const MomentTable* m1 = nullptr;
  if (p.t != 0) {
    m1 = detail::find_table(tables, kInverseXShift);
    if (!m1) throw DomainError("aux_compute needs the (-1,0) moment table for t > 0");
    if (m1->k_max() < 2 * n) throw DomainError("aux_compute: (-1,0) table too short");
  }
  const auto& cn = sys.coeffs[static_cast<std::size_t>(n)];
  AuxRow row;
  row.R = p.beta / sys.h[n] * detail::bilinear_contract(cn, cn, *nu);
  row.Rstar = m1 ? Real(p.t / sys.h[n] * detail::bilinear_contract(cn, cn, *m1)) : Real(0);
  if (n == 0) {
    row.r = 0;
    row.rstar = 0;
  } else {
    const auto& cm = sys.coeffs[static_cast<std::size_t>(n - 1)];
    row.r = p.beta / sys.h[n - 1] * detail::bilinear_contract(cm, cn, *nu);
    row.rstar = m1 ? Real(p.t / sys.h[n - 1] * detail::bilinear_contract(cm, cn, *m1)) : Real(0);
  }
  return row;
}

/// Fills every row 0..sys.n_max and the derived H, H~, H', S arrays.
inline AuxSet aux_fill(const OrthoSystem& sys, std::span<const MomentTable> tables, const PrecisionCtx& ctx) {
  PrecisionScope scope(ctx.working_bits);
  const WeightParams& p = sys.params;
  AuxSet a;
  a.params = p;
  a.n_max = sys.n_max;
  const std::size_t N = static_cast<std::size_t>(sys.n_max) + 1;
  a.R.resize(N);
  a.Rstar.resize(N);
  a.r.resize(N);
  a.rstar.resize(N);
  a.S.resize(N);
  for (int n = 0; n <= sys.n_max; ++n) {
    AuxRow row = aux_compute(sys, tables, n, ctx);
    a.R[n] = std::move(row.R);
    a.Rstar[n] = std::move(row.Rstar);
    a.r[n] = std::move(row.r);
    a.rstar[n] = std::move(row.rstar);
    a.S[n] = a.R[n] / (p.c(n) + 1);
  }
  a.H.resize(N + 1);
  a.Htil.resize(N + 1);
  a.H[0] = 0;
  for (std::size_t n = 1; n <= N; ++n) a.H[n] = a.H[n - 1] - a.Rstar[n - 1];
  for (std::size_t n = 0; n <= N; ++n) {
    const int k = static_cast<int>(n);
    a.Htil[n] = a.H[n] - k * (k + p.alpha + p.beta);
  }
  if (p.t != 0) {
    a.Hprime.resize(N);
    for (int n = 0; n <= sys.n_max; ++n) a.Hprime[n] = -n + p.c(n) * a.rstar[n] / p.t;
  }
  return a;
}

struct LadderCoeffs {
  Complex A;
  Complex B;
};

/// A_n(z), B_n(z) from the partial-fraction form.
inline LadderCoeffs an_bn_eval(const AuxSet& aux, int n, const Complex& z) {
  if (n < 0 || n > aux.n_max) throw DomainError("an_bn_eval: n outside the auxiliary table");
  if ((z.re == 0 && z.im == 0) || (z.re == 1 && z.im == 0)) throw DomainError("A_n, B_n have poles at z = 0 and z = 1");
  const Complex iz = Complex(1) / z;
  const Complex iz2 = iz * iz;
  const Complex izm1 = Complex(1) / (z - Complex(1));
  LadderCoeffs out;
  out.A = iz2 * aux.Rstar[n] + iz * aux.R[n] - izm1 * aux.R[n];
  out.B = iz2 * aux.rstar[n] - iz * Real(n - aux.r[n]) - izm1 * aux.r[n];
  return out;
}

struct LadderOracle {
  LadderCoeffs value;
  Real A_bound;  ///< bound on |A error| from the quadrature bounds
  Real B_bound;
};

/// A_n(z), B_n(z) straight from their defining integrals with the
/// divided-difference kernel of v', by quadrature.  z must lie off [0,1].
inline LadderOracle an_bn_oracle(const OrthoSystem& sys, int n, const Complex& z, const PrecisionCtx& ctx) {
  if (n < 0 || n > sys.n_max) throw DomainError("an_bn_oracle: n outside the built system");
  if (z.im == 0 && z.re >= 0 && z.re <= 1) throw DomainError("an_bn_oracle: z must lie off the support [0,1]");
  PrecisionScope scope(ctx.working_bits);
  const WeightParams& p = sys.params;
  // kernel(z,y) = k1(y)/z^2 + k2(y)/z + k3(y)/(z-1) with
  // k1 = t/y, k2 = (alpha y + t)/y^2, k3 = -beta/(1-y).
  auto integrand = [&](const Real& y, const Real& yc, std::span<Real> out) {
    const Real w = weight_with_complement(p, y, yc);
    auto [pm, pn] = poly_pair_real(sys, n, y);
    const Real k1 = p.t / y;
    const Real k2 = (p.alpha * y + p.t) / (y * y);
    const Real k3 = -p.beta / yc;
    const Real sq = pn * pn * w;
    const Real mixed = n == 0 ? Real(0) : Real(pm * pn * w);
    out[0] = sq * k1;
    out[1] = sq * k2;
    out[2] = sq * k3;
    out[3] = mixed * k1;
    out[4] = mixed * k2;
    out[5] = mixed * k3;
  };
  QuadVectorResult q = de_quad_vec(integrand, 6, Interval::unit, ctx);
  const Complex iz = Complex(1) / z;
  const Complex iz2 = iz * iz;
  const Complex izm1 = Complex(1) / (z - Complex(1));
  const Real hA = sys.h[n];
  const Real hB = n == 0 ? Real(1) : sys.h[n - 1];
  LadderOracle o;
  o.value.A = (iz2 * q.values[0] + iz * q.values[1] + izm1 * q.values[2]) / hA;
  o.value.B = (iz2 * q.values[3] + iz * q.values[4] + izm1 * q.values[5]) / hB;
  o.A_bound = (abs(iz2) * q.error_bounds[0] + abs(iz) * q.error_bounds[1] + abs(izm1) * q.error_bounds[2]) / hA;
  o.B_bound = (abs(iz2) * q.error_bounds[3] + abs(iz) * q.error_bounds[4] + abs(izm1) * q.error_bounds[5]) / hB;
  return o;
}

struct HnValues {
  Real H;
  Real Htil;
  std::optional<Real> Hprime;  ///< absent at t = 0
};

inline HnValues hn_from_aux(const AuxSet& aux, int n) {
  if (n < 0 || n > aux.n_max) throw DomainError("hn_from_aux: n outside the auxiliary table");
  HnValues v{aux.H[n], aux.Htil[n], std::nullopt};
  if (!aux.Hprime.empty()) v.Hprime = aux.Hprime[n];
  return v;
}

/// alpha_n and beta_n rebuilt from R_n, r_n, r*_n.
inline std::pair<Real, Real> recurrence_from_aux(const AuxSet& aux, int n) {
  if (n < 0 || n > aux.n_max) throw DomainError("recurrence_from_aux: n outside the auxiliary table");
  const WeightParams& p = aux.params;
  const Real d = aux.rstar[n] - aux.r[n];
  Real a = (2 * d + aux.R[n] - p.beta - p.t) / (p.c(n) + 2);
  Real b = 0;
  if (n >= 1) {
    const Real c = p.c(n);
    b = (-d * d - (p.beta + p.t) * aux.r[n] + (p.t - p.alpha - 2 * n) * aux.rstar[n] + n * p.t) / (1 - c * c);
  }
  return {std::move(a), std::move(b)};
}

}  // namespace pjlab
