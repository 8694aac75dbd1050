#pragma once

/// Monic orthogonal polynomials of a moment functional.
///
/// The Hankel matrix (mu_{j+k}) is factored as L D L^T with L unit lower
/// triangular.  The rows of L^{-1} are the coefficient vectors of the monic
/// orthogonal polynomials P_n and D holds the squared norms h_n, so a single
/// factorisation yields h_n, the subleading coefficients p1(n), the
/// recurrence coefficients and the Hankel determinants D_n = prod_{j<n} h_j.

#include "pjlab/moments.hpp"

#include <sstream>
#include <utility>
#include <vector>

namespace pjlab {

struct OrthoSystem {
  WeightParams params;
  int n_max = 0;
  std::vector<Real> h;          ///< h_n, n = 0..n_max
  std::vector<Real> p1;         ///< coefficient of z^{n-1} in P_n, n = 0..n_max+1
  std::vector<Real> alpha_rec;  ///< alpha_n = <x P_n, P_n> / h_n, n = 0..n_max
  std::vector<Real> beta_rec;   ///< beta_n = h_n / h_{n-1}, n = 1..n_max; beta_rec[0] = 0 (unused)
  std::vector<Real> D;          ///< D_n = prod_{j<n} h_j, n = 0..n_max+1 (D_0 = 1)
  /// coeffs[n][j] is the coefficient of x^j in P_n, n = 0..n_max+1.
  std::vector<std::vector<Real>> coeffs;
};

/// Guard bits for the factorisation: the Hankel matrix loses roughly a
/// fixed number of bits per order, so the elimination runs above the
/// working precision and the results are rounded back.
inline constexpr unsigned kFactorGuardBits = 64;

/// Builds P_0..P_{n_max+1} from a moment table with k_max >= 2 n_max + 1.
inline OrthoSystem build_ortho(const MomentTable& moments, int n_max, const PrecisionCtx& ctx) {
  if (n_max < 0) throw DomainError("build_ortho: n_max must be >= 0");
  if (moments.shift != MomentShift{}) throw DomainError("build_ortho expects an unshifted moment table");
  if (moments.k_max() < 2 * n_max + 1) throw DomainError("build_ortho: moment table must cover k <= 2 n_max + 1");
  const int N = n_max + 1;
  OrthoSystem sys;
  {
    PrecisionScope guarded(ctx.working_bits + kFactorGuardBits);
    std::vector<Real> mu_hi(static_cast<std::size_t>(2 * N));
    for (int k = 0; k < 2 * N; ++k) mu_hi[k] = rebind(moments[k]);
    auto mu = [&](int k) -> const Real& { return mu_hi[static_cast<std::size_t>(k)]; };

    // L D L^T of the N x N Hankel matrix.
    std::vector<std::vector<Real>> L(N, std::vector<Real>(N, Real(0)));
    std::vector<Real> d(N);
    for (int j = 0; j < N; ++j) {
      Real pivot = mu(2 * j);
      for (int k = 0; k < j; ++k) pivot -= L[j][k] * L[j][k] * d[k];
      if (!(pivot > 0)) {
        std::ostringstream msg;
        msg << "Hankel moment matrix lost positive definiteness at order " << j << " (" << ctx.working_bits
            << " bits); increase the working precision";
        throw PrecisionError(msg.str());
      }
      d[j] = pivot;
      L[j][j] = 1;
      for (int i = j + 1; i < N; ++i) {
        Real s = mu(i + j);
        for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k] * d[k];
        L[i][j] = s / pivot;
      }
    }

    sys.params = moments.params;
    sys.n_max = n_max;
    sys.h = d;

    // Rows of L^{-1}.
    sys.coeffs.assign(N + 1, {});
    for (int n = 0; n < N; ++n) {
      std::vector<Real> row(n + 1, Real(0));
      row[n] = 1;
      for (int j = n - 1; j >= 0; --j) {
        Real s = 0;
        for (int k = j + 1; k <= n; ++k) s -= L[k][j] * row[k];
        row[j] = s;
      }
      sys.coeffs[n] = std::move(row);
    }

    // alpha_n from the moment contraction <x P_n, P_n> / h_n.
    sys.alpha_rec.resize(N);
    for (int n = 0; n < N; ++n) {
      const auto& c = sys.coeffs[n];
      Real s = 0;
      for (int i = 0; i <= n; ++i) {
        Real inner = 0;
        for (int j = 0; j <= n; ++j) inner += c[j] * mu(i + j + 1);
        s += c[i] * inner;
      }
      sys.alpha_rec[n] = s / sys.h[n];
    }
    sys.beta_rec.assign(N, Real(0));
    for (int n = 1; n < N; ++n) sys.beta_rec[n] = sys.h[n] / sys.h[n - 1];

    // P_{n_max+1} = (x - alpha_n) P_n - beta_n P_{n-1}.
    {
      const int n = n_max;
      std::vector<Real> next(n + 2, Real(0));
      for (int j = 0; j <= n; ++j) {
        next[j + 1] += sys.coeffs[n][j];
        next[j] -= sys.alpha_rec[n] * sys.coeffs[n][j];
      }
      if (n >= 1)
        for (int j = 0; j < n; ++j) next[j] -= sys.beta_rec[n] * sys.coeffs[n - 1][j];
      sys.coeffs[N] = std::move(next);
    }

    sys.p1.resize(N + 1);
    sys.p1[0] = 0;
    for (int n = 1; n <= N; ++n) sys.p1[n] = sys.coeffs[n][n - 1];

    sys.D.resize(N + 1);
    sys.D[0] = 1;
    for (int n = 1; n <= N; ++n) sys.D[n] = sys.D[n - 1] * sys.h[n - 1];
  }

  PrecisionScope scope(ctx.working_bits);
  auto round_all = [](std::vector<Real>& v) {
    for (auto& x : v) x = rebind(x);
  };
  round_all(sys.h);
  round_all(sys.p1);
  round_all(sys.alpha_rec);
  round_all(sys.beta_rec);
  round_all(sys.D);
  for (auto& row : sys.coeffs) round_all(row);
  return sys;
}

/// det(mu_{j+k})_{j,k<n} by fraction-free (Bareiss) elimination carried out
/// `extra_bits` above the working precision.  Independent of build_ortho.
inline Real hankel_det_oracle(const MomentTable& moments, int n, const PrecisionCtx& ctx, unsigned extra_bits = 64) {
  if (n < 0) throw DomainError("hankel_det_oracle: n must be >= 0");
  if (n == 0) {
    PrecisionScope scope(ctx.working_bits);
    return Real(1);
  }
  if (moments.k_max() < 2 * n - 2) throw DomainError("hankel_det_oracle: moment table too short");
  Real det;
  {
    PrecisionScope hi(ctx.working_bits + extra_bits);
    std::vector<std::vector<Real>> M(n, std::vector<Real>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M[i][j] = rebind(moments[i + j]);
    Real prev = 1;
    for (int k = 0; k < n - 1; ++k) {
      if (M[k][k] == 0) throw PrecisionError("hankel_det_oracle: zero pivot");
      for (int i = k + 1; i < n; ++i)
        for (int j = k + 1; j < n; ++j) M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]) / prev;
      prev = M[k][k];
    }
    det = M[n - 1][n - 1];
  }
  PrecisionScope scope(ctx.working_bits);
  return rebind(det);
}

struct PolyValue {
  Complex value;
  Complex derivative;
};

/// P_n(z) and P_n'(z) by the three-term recurrence, P_0 = 1, beta_0 P_{-1} = 0.
/// Valid for n <= n_max + 1.
inline PolyValue poly_eval(const OrthoSystem& sys, int n, const Complex& z) {
  if (n < 0 || n > sys.n_max + 1) throw DomainError("poly_eval: degree outside the built system");
  Complex p_prev(0), p(1), d_prev(0), d(0);
  for (int k = 0; k < n; ++k) {
    const Complex zk = z - Complex(sys.alpha_rec[k]);
    Complex p_next = zk * p;
    Complex d_next = p + zk * d;
    if (k >= 1) {
      p_next -= p_prev * sys.beta_rec[k];
      d_next -= d_prev * sys.beta_rec[k];
    }
    p_prev = std::move(p);
    p = std::move(p_next);
    d_prev = std::move(d);
    d = std::move(d_next);
  }
  return {p, d};
}

/// Real-argument recurrence evaluation of P_{n-1}(x) and P_n(x).
inline std::pair<Real, Real> poly_pair_real(const OrthoSystem& sys, int n, const Real& x) {
  if (n < 0 || n > sys.n_max + 1) throw DomainError("poly_pair_real: degree outside the built system");
  Real p_prev = 0, p = 1;
  for (int k = 0; k < n; ++k) {
    Real p_next = (x - sys.alpha_rec[k]) * p;
    if (k >= 1) p_next -= sys.beta_rec[k] * p_prev;
    p_prev = std::move(p);
    p = std::move(p_next);
  }
  return {p_prev, p};
}

/// P_n(z) from the stored coefficient table (Horner), independent of the
/// recurrence coefficients.
inline Complex poly_eval_coeffs(const OrthoSystem& sys, int n, const Complex& z) {
  if (n < 0 || n > sys.n_max + 1) throw DomainError("poly_eval_coeffs: degree outside the built system");
  const auto& c = sys.coeffs[n];
  Complex acc(0);
  for (int j = n; j >= 0; --j) acc = acc * z + Complex(c[j]);
  return acc;
}

}  // namespace pjlab
