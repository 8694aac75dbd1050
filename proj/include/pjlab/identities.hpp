#pragma once

/// Identity checks on pipeline values.
///
/// Every identity has one evaluator in `identity_registry()`; each
/// evaluator appends ResidualReports for the n range of a run.  Suites
/// group the evaluators:
///
///   moments     moment routes, positivity
///   ortho       orthogonality, recurrence, Hankel determinants
///   ladder      ladder relations and compatibility conditions at sample z
///   difference  relations among R*_n, R_n, r*_n, r_n
///   recurrence  alpha_n, beta_n, H_n, R_n, r_n in terms of each other
///   discrete    second-order difference equation for H~_n
///   t0          t = 0 closed forms and large-n limits
///   kummer      n = 0 values as Kummer U ratios, large/small t behaviour of R_0
///   toda        t-derivatives of alpha_n, beta_n, p1(n), ln D_n, r_n, r*_n
///   sigma       second-order ODE for H_n and the quadratic relations behind it
///   riccati     Riccati equation for R_n, the factored second-order ODE, Painleve V
///   p3          PIII limit beta -> infinity with t = s / beta

#include "pjlab/closed_forms.hpp"
#include "pjlab/pipeline.hpp"
#include "pjlab/residual.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace pjlab {

struct SuiteOptions {
  Tolerances tol;
  /// Degree for the large-n limits at t = 0.
  int classical_n = 200;
  /// PIII limit: s values, beta values (increasing) and degree.
  std::vector<std::string> p3_s{"1"};
  std::vector<std::string> p3_betas{"1e3", "1e4", "1e5"};
  int p3_n = 1;
  /// log2 of the coarse relative stencil steps used to measure the order
  /// of the t-derivative checks (each step a quarter of the previous).
  std::vector<double> refine_log2{-6, -8, -10};
  /// t values of the large-t and small-t probes of R_0.
  std::vector<std::string> large_t{"1e2", "1e3", "1e4"};
  std::string small_t = "1e-3";
};

const std::vector<std::string>& all_suites();

/// Fixed-seed sample of `count` points in the annulus 1.5 <= |z - 1/2| <= 3.
inline std::vector<Complex> sample_points(int count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<Complex> zs;
  zs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double rho = 1.5 + 1.5 * unit();
    const double theta = 2 * M_PI * unit();
    const Real th(theta);
    zs.emplace_back(Real(Real("0.5") + Real(rho) * boost::multiprecision::cos(th)),
                    Real(Real(rho) * boost::multiprecision::sin(th)));
  }
  return zs;
}

inline constexpr std::uint64_t kLadderSeed = 0x6a09e667f3bcc908ULL;
inline constexpr std::uint64_t kRecurrenceSeed = 0xbb67ae8584caa73bULL;

/// Everything a check may look at.  Point-scope checks get a snapshot at
/// one t (plus stencil families for t > 0); parameter-scope checks build
/// their own pipelines from (alpha, beta).
struct CheckContext {
  WeightParams params;
  PrecisionCtx ctx;
  const SuiteOptions* opt = nullptr;
  int n_check = 0;
  const Snapshot* snap = nullptr;
  const TFamily* fam = nullptr;
  const std::vector<TFamily>* refine = nullptr;
  std::vector<ResidualReport>* out = nullptr;

  Real floor() const { return residual_floor(ctx.working_bits); }
  Real tol(const std::string& cls) const { return opt->tol.get(cls, ctx.working_bits); }

  ResidualReport base(const std::string& name, const std::string& suite, const std::string& cls, int n) const {
    ResidualReport r;
    r.identity = name;
    r.suite = suite;
    r.tol_class = cls;
    r.alpha = params.alpha;
    r.beta = params.beta;
    r.n = n;
    r.t = params.t;
    r.tolerance = tol(cls);
    return r;
  }

  void push(ResidualReport r, std::optional<Status> forced = std::nullopt) const {
    if (forced)
      r.status = *forced;
    else
      r.status = r.residual < r.tolerance ? Status::pass : Status::fail;
    out->push_back(std::move(r));
  }

  /// Normalized residual of an identity written as diff = lhs - rhs.
  template <class V>
  void add(const std::string& name, const std::string& suite, const std::string& cls, int n, const Tracked<V>& diff,
           std::string notes = {}, std::optional<Complex> z = std::nullopt) const {
    ResidualReport r = base(name, suite, cls, n);
    r.residual = normalized(diff, floor());
    r.notes = std::move(notes);
    r.z = std::move(z);
    push(std::move(r));
  }

  /// A plain measured value compared against a class tolerance.
  void add_value(const std::string& name, const std::string& suite, const std::string& cls, int n, const Real& value,
                 std::string notes = {}, std::optional<Status> forced = std::nullopt) const {
    ResidualReport r = base(name, suite, cls, n);
    r.residual = value;
    r.notes = std::move(notes);
    push(std::move(r), forced);
  }
};

struct IdentityCheck {
  enum class Scope { point, params };
  std::string name;
  std::string suite;
  std::string tol_class;
  Scope scope = Scope::point;
  bool needs_t_positive = false;
  bool needs_t_zero = false;
  bool needs_family = false;
  std::function<void(const CheckContext&)> run;
};

namespace detail {

inline std::string fmt_short(const Real& x) { return format_sci(x, 6); }

inline bool singular(const TR& d, unsigned bits) {
  PrecisionScope scope(bits);
  return boost::multiprecision::abs(d.v) <= pow10_real(-static_cast<int>(bits / 6)) * d.m;
}

/// Worst normalized residual over a z sample; returns (residual, z).
template <class F>
std::pair<Real, Complex> worst_over(const std::vector<Complex>& zs, const Real& floor, F&& f) {
  Real worst = -1;
  Complex at;
  for (const auto& z : zs) {
    TC d = f(z);
    Real res = normalized(d, floor);
    if (res > worst || boost::multiprecision::isnan(res)) {
      worst = res;
      at = z;
      if (boost::multiprecision::isnan(res)) break;
    }
  }
  return {worst, at};
}

inline void add_worst(const CheckContext& c, const std::string& name, const std::string& suite,
                      const std::string& cls, int n, const std::pair<Real, Complex>& w) {
  ResidualReport r = c.base(name, suite, cls, n);
  r.residual = w.first;
  r.z = w.second;
  r.notes = "worst of sample";
  c.push(std::move(r));
}

// P_0(x)..P_top(x) by the three-term recurrence (stable on [0,1], unlike
// Horner on monomial coefficients).
inline void poly_values_real(const OrthoSystem& sys, int top, const Real& x, std::vector<Real>& vals) {
  vals.resize(static_cast<std::size_t>(top) + 1);
  vals[0] = 1;
  if (top >= 1) vals[1] = x - sys.alpha_rec[0];
  for (int k = 1; k < top; ++k) vals[k + 1] = (x - sys.alpha_rec[k]) * vals[k] - sys.beta_rec[k] * vals[k - 1];
}

// Polynomial values at complex z, tracked with the absolute-coefficient
// magnitude sum |c_j| |z|^j.
inline TC poly_tracked(const OrthoSystem& sys, int n, const Complex& z) {
  const auto& c = sys.coeffs[static_cast<std::size_t>(n)];
  Complex acc(0);
  Real mag = 0;
  const Real az = abs(z);
  for (int j = n; j >= 0; --j) {
    acc = acc * z + Complex(c[j]);
    mag = mag * az + boost::multiprecision::abs(c[j]);
  }
  return {acc, mag};
}

// t-derivative identity evaluated on one family.
struct StencilEval {
  TR diff;
  Real proxy;  ///< absolute fd error proxy of diff
};

enum class TodaKind { alpha, beta, p1, log_hankel, r_pair };

inline StencilEval toda_eval(const TFamily& f, TodaKind kind, int n) {
  const Snapshot& s = f.center();
  PrecisionScope scope(s.ctx.working_bits);
  const Real& t = s.params.t;
  const auto& a = s.aux;
  const auto& sys = s.sys;
  switch (kind) {
    case TodaKind::alpha: {
      FdEstimate d = f.derivative([n](const Snapshot& x) { return x.sys.alpha_rec[n]; }, 1);
      return {TR(Real(t * d.value)) - TR(a.rstar[n]) + TR(a.rstar[n + 1]), Real(t * d.error_proxy)};
    }
    case TodaKind::beta: {
      FdEstimate d = f.derivative([n](const Snapshot& x) { return x.sys.beta_rec[n]; }, 1);
      return {TR(Real(t * d.value)) - (TR(a.Rstar[n - 1]) - TR(a.Rstar[n])) * TR(sys.beta_rec[n]),
              Real(t * d.error_proxy)};
    }
    case TodaKind::p1: {
      FdEstimate d = f.derivative([n](const Snapshot& x) { return x.sys.p1[n]; }, 1);
      return {TR(Real(t * d.value)) - TR(a.rstar[n]), Real(t * d.error_proxy)};
    }
    case TodaKind::log_hankel: {
      HankelLogDerivative hd = hankel_Hn(f, n);
      TR sum = 0;
      for (int j = 0; j < n; ++j) sum += TR(a.Rstar[j]);
      return {TR(hd.H) + sum, hd.error_proxy};
    }
    case TodaKind::r_pair: {
      FdEstimate ds = f.derivative([n](const Snapshot& x) { return x.aux.rstar[n]; }, 1);
      FdEstimate dr = f.derivative([n](const Snapshot& x) { return x.aux.r[n]; }, 1);
      return {TR(Real(t * ds.value)) - TR(a.rstar[n]) - TR(Real(t * dr.value)),
              Real(t * (ds.error_proxy + dr.error_proxy))};
    }
  }
  throw DomainError("unknown t-derivative identity");
}

inline int toda_n_min(TodaKind k) { return k == TodaKind::alpha ? 0 : 1; }

inline void toda_report(const CheckContext& c, const std::string& name, TodaKind kind) {
  for (int n = toda_n_min(kind); n <= c.n_check; ++n) {
    StencilEval e = toda_eval(*c.fam, kind, n);
    ResidualReport r = c.base(name, "toda", "toda", n);
    const Real fl = c.floor();
    r.residual = normalized(e.diff, fl);
    const Real proxy = e.proxy / (e.diff.m + fl);
    if (proxy < r.tolerance) r.tolerance = proxy;
    r.notes = "fd proxy " + fmt_short(proxy);
    c.push(std::move(r));
  }
}

struct RiccatiInputs {
  Real R, Rp, Rpp, r, rp, rs;
};

/// Linear equations in (r, r') obtained from the two representations of
/// R_n after eliminating r*_n with the Riccati equation; solved for
/// (r, r') given (R, R').
inline std::pair<Real, Real> solve_r_rprime(const WeightParams& p, int n, const Real& R, const Real& Rp) {
  const Real& t = p.t;
  const Real C = p.c(n) + 1;
  const Real K = t * Rp / (2 * R) + C * (R - p.beta) / (2 * R) - (R - p.beta - t) / 2;
  auto rstar_of = [&](const Real& r) { return Real(r * (1 - C / R) + K); };
  // Representation of R_n, cross-multiplied: R * 2 den - C num(-) = 0
  auto e1 = [&](const Real& r, const Real& rp) {
    const Real rs = rstar_of(r);
    const Real den = (rs - r) * (rs - r) + (2 * n + p.alpha - t) * rs + (p.beta + t) * r - n * t;
    const Real num = 2 * r * r + (t + 2 * p.beta - 2 * rs) * r + (2 * n + p.alpha) * rs - n * t - t * rp;
    return Real(2 * R * den - C * num);
  };
  // Representation of 1/R_n, cross-multiplied: R num(+) - 2 C (beta + r) r = 0
  auto e2 = [&](const Real& r, const Real& rp) {
    const Real rs = rstar_of(r);
    const Real num = 2 * r * r + (t + 2 * p.beta - 2 * rs) * r + (2 * n + p.alpha) * rs - n * t + t * rp;
    return Real(R * num - 2 * C * (p.beta + r) * r);
  };
  const Real zero = 0, one = 1;
  const Real c1 = e1(zero, zero), c2 = e2(zero, zero);
  const Real a1 = e1(one, zero) - c1, b1 = e1(zero, one) - c1;
  const Real a2 = e2(one, zero) - c2, b2 = e2(zero, one) - c2;
  const Real det = a1 * b2 - a2 * b1;
  if (det == 0) throw PrecisionError("singular linear system for (r_n, r_n')");
  Real r = (-c1 * b2 + c2 * b1) / det;
  Real rp = (-a1 * c2 + a2 * c1) / det;
  return {std::move(r), std::move(rp)};
}

/// Both factors of the factored second-order equation for R_n, as tracked
/// values (first: Riccati branch, second: the Painleve branch).
inline std::pair<TR, std::vector<TR>> two_ode_factors(const WeightParams& p, int n, const TR& R, const TR& Rp,
                                                      const TR& Rpp) {
  const TR t(p.t), a(p.alpha), b(p.beta);
  const TR c(p.c(n)), C(Real(p.c(n) + 1));
  TR f1 = c * C - TR(Real(4 * n + 2 * p.alpha + 2 * p.beta + 1)) * R + R * R - t * Rp;
  const TR C1 = -(t * t) + TR(2) * a * t + TR(3) * C * C - b * b;
  const TR C2 = -(C * (t * t + TR(2) * a * t + C * C - TR(3) * b * b));
  std::vector<TR> terms{
      TR(2) * t * t * (C - R) * R * Rpp,
      t * t * (TR(3) * R - C) * Rp * Rp,
      TR(2) * t * (C - R) * R * Rp,
      R * R * R * R * R,
      -(TR(3) * C * R * R * R * R),
      C1 * R * R * R,
      C2 * R * R,
      -(TR(3) * b * b * C * C * R),
      b * b * C * C * C,
  };
  return {f1, terms};
}

inline TR sum_of(const std::vector<TR>& v) {
  TR s = 0;
  for (const auto& x : v) s += x;
  return s;
}

/// Left minus right side of the second-order difference equation for
/// H~_n, assembled term by term as displayed, plus the Z_n denominator.
inline std::pair<TR, TR> discrete_sigma_residual(const WeightParams& p, int n, const TR& Hm, const TR& H0,
                                                 const TR& Hp) {
  const TR t(p.t), a(p.alpha), b(p.beta);
  const TR c(p.c(n));
  const TR bt = b + t;
  const TR G = H0 + TR(n) * bt;
  const TR Z = c * ((c - TR(1)) * (c + TR(1)) - (c + TR(1) / c) * bt - (c + TR(1)) * (Hm + TR(n - 1) * bt) +
                    TR(2) * G / (c * c) + (c - TR(1)) * (Hp + TR(n + 1) * bt));
  const TR W = -(TR(n) * t * bt) + (a * b + TR(2) * b * (TR(n) - t) + (TR(2 * n) - t) * t) * G / c +
               (-a + TR(2) * b - TR(2 * n) + TR(3) * t) * G * G / (c * c) - TR(2) * G * G * G / (c * c * c);
  const TR Zt =
      TR(n) * t + (-TR(2 * n) - a + t) * G / c - G * G / (c * c) - (TR(1) - c * c) / Z * W;
  const TR lhs = TR(n) * t - (TR(2 * n) + a) * G / c + Zt / c * (-TR(2 * n) - a - t + TR(2) * G / c) +
                 TR(2) * Zt * Zt / (c * c);
  const TR bracket = -(TR(2) * H0 * H0) + TR(2) * H0 * (TR(1) + Hp) + Hp * (c - TR(1)) -
                     Hm * (c + TR(1) - TR(2) * H0 + TR(2) * Hp);
  const TR rhs = bracket / Z * W;
  return {lhs - rhs, Z};
}

/// PIII sigma-form residual (s H'')^2 - (n + a H')^2 - 4 (s H' - H) H' (1 - H')
/// from a finite-beta pipeline at t = s / beta.
struct P3Point {
  Real beta;
  Real residual;
};

inline P3Point p3_point(const Real& alpha, const Real& beta, const Real& s, int n, const PrecisionCtx& ctx) {
  PrecisionScope scope(ctx.working_bits);
  const WeightParams p{alpha, beta, Real(s / beta)};
  auto center = std::make_shared<const Snapshot>(build_snapshot(p, n, ctx, false));
  TFamily fam = build_family(center, ctx);
  const auto& aux = center->aux;
  const FdEstimate hpp = fam.derivative([n](const Snapshot& x) { return x.aux.Hprime[n]; }, 1);
  const TR H(aux.H[n]);
  const TR Hs(Real(aux.Hprime[n] / beta));
  const TR Hss(Real(hpp.value / (beta * beta)));
  const TR S(s), A(alpha);
  const TR diff = (S * Hss) * (S * Hss) - (TR(n) + A * Hs) * (TR(n) + A * Hs) -
                  TR(4) * (S * Hs - H) * Hs * (TR(1) - Hs);
  return {beta, normalized(diff, residual_floor(ctx.working_bits))};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Registry

inline const std::vector<IdentityCheck>& identity_registry() {
  using detail::TodaKind;
  using Scope = IdentityCheck::Scope;
  static const std::vector<IdentityCheck> reg = [] {
    std::vector<IdentityCheck> v;
    auto point = [&v](std::string name, std::string suite, std::string cls, std::function<void(const CheckContext&)> f,
                      bool t_pos = false, bool family = false, bool t_zero = false) {
      IdentityCheck c;
      c.name = std::move(name);
      c.suite = std::move(suite);
      c.tol_class = std::move(cls);
      c.scope = Scope::point;
      c.needs_t_positive = t_pos || family;
      c.needs_family = family;
      c.needs_t_zero = t_zero;
      c.run = std::move(f);
      v.push_back(std::move(c));
    };
    auto params = [&v](std::string name, std::string suite, std::string cls, std::function<void(const CheckContext&)> f,
                       bool t_pos, bool t_zero) {
      IdentityCheck c;
      c.name = std::move(name);
      c.suite = std::move(suite);
      c.tol_class = std::move(cls);
      c.scope = Scope::params;
      c.needs_t_positive = t_pos;
      c.needs_t_zero = t_zero;
      c.run = std::move(f);
      v.push_back(std::move(c));
    };

    // ---------------- moments
    point("moment_route_agreement", "moments", "route", [](const CheckContext& c) {
      for (const auto& tab : c.snap->tables) {
        if (tab.route_agreement.empty()) continue;
        Real worst = -1;
        int at = 0;
        for (int k = 0; k <= tab.k_max(); ++k) {
          const Real ratio = tab.combined_bounds[k] > 0 ? Real(tab.route_agreement[k] / tab.combined_bounds[k])
                                                        : Real(tab.route_agreement[k] == 0 ? 0 : 1e300);
          if (ratio > worst) {
            worst = ratio;
            at = k;
          }
        }
        c.add_value("moment_route_agreement", "moments", "route", at, worst,
                    "shift " + to_string(tab.shift) + ", k <= " + std::to_string(tab.k_max()) +
                        (c.params.t == 0 ? ", quadrature vs Beta form" : ", quadrature vs Kummer U"));
      }
    });
    point(
        "moment_beta_closed_form", "moments", "algebraic",
        [](const CheckContext& c) {
          for (const auto& tab : c.snap->tables) {
            if (tab.route_agreement.empty()) continue;
            Real worst = 0;
            int at = 0;
            for (int k = 0; k <= tab.k_max(); ++k) {
              const Real rel = tab.route_agreement[k] / tab.mu[k];
              if (rel > worst) {
                worst = rel;
                at = k;
              }
            }
            c.add_value("moment_beta_closed_form", "moments", "algebraic", at, worst,
                        "shift " + to_string(tab.shift) + ", relative, k <= " + std::to_string(tab.k_max()));
          }
        },
        false, false, true);
    point("moment_positivity", "moments", "property", [](const CheckContext& c) {
      int bad = 0;
      for (const auto& tab : c.snap->tables)
        for (const auto& m : tab.mu)
          if (!(m > 0)) ++bad;
      c.add_value("moment_positivity", "moments", "property", 0, Real(bad ? 1 : 0),
                  std::to_string(bad) + " non-positive entries");
    });

    // ---------------- ortho
    point("orthogonality", "ortho", "quadrature", [](const CheckContext& c) {
      const auto& sys = c.snap->sys;
      const int top = c.n_check + 1;
      const WeightParams& p = c.params;
      // components: P_n^2 w for n = 0..top, then P_n P_{n-1} w and P_n P_{n-2} w for n = 1..top
      const std::size_t sq0 = 0, cross0 = static_cast<std::size_t>(top) + 1;
      auto f = [&](const Real& x, const Real& xc, std::span<Real> out) {
        const Real w = weight_with_complement(p, x, xc);
        std::vector<Real> vals;
        detail::poly_values_real(sys, top, x, vals);
        for (int n = 0; n <= top; ++n) out[sq0 + n] = vals[n] * vals[n] * w;
        for (int n = 1; n <= top; ++n) {
          const std::size_t b = cross0 + 2 * static_cast<std::size_t>(n - 1);
          out[b] = vals[n] * vals[n - 1] * w;
          out[b + 1] = n >= 2 ? Real(vals[n] * vals[n - 2] * w) : Real(0);
        }
      };
      QuadVectorResult q = de_quad_vec(f, cross0 + 2 * static_cast<std::size_t>(top), Interval::unit, c.ctx);
      for (int n = 1; n <= top; ++n) {
        const std::size_t b = cross0 + 2 * static_cast<std::size_t>(n - 1);
        const Real r1 = boost::multiprecision::abs(q.values[b]) /
                        (boost::multiprecision::sqrt(q.values[sq0 + n] * q.values[sq0 + n - 1]) + c.floor());
        const Real r2 = n >= 2 ? Real(boost::multiprecision::abs(q.values[b + 1]) /
                                      (boost::multiprecision::sqrt(q.values[sq0 + n] * q.values[sq0 + n - 2]) + c.floor()))
                               : Real(0);
        c.add_value("orthogonality", "ortho", "quadrature", n, r1 > r2 ? r1 : r2,
                    "<P_n,P_{n-1}> and <P_n,P_{n-2}> relative to the product of norms");
      }
    });
    point("three_term_recurrence", "ortho", "algebraic", [](const CheckContext& c) {
      const auto& sys = c.snap->sys;
      const auto zs = sample_points(16, kRecurrenceSeed);
      for (int n = 0; n <= c.n_check; ++n) {
        auto w = detail::worst_over(zs, c.floor(), [&](const Complex& z) {
          TC d = TC(z) * detail::poly_tracked(sys, n, z) - detail::poly_tracked(sys, n + 1, z) -
                 TC(Complex(sys.alpha_rec[n])) * detail::poly_tracked(sys, n, z);
          if (n >= 1) d -= TC(Complex(sys.beta_rec[n])) * detail::poly_tracked(sys, n - 1, z);
          return d;
        });
        detail::add_worst(c, "three_term_recurrence", "ortho", "algebraic", n, w);
      }
    });
    point("alpha_from_p1", "ortho", "algebraic", [](const CheckContext& c) {
      const auto& s = c.snap->sys;
      for (int n = 0; n <= c.n_check; ++n)
        c.add("alpha_from_p1", "ortho", "algebraic", n, TR(s.alpha_rec[n]) - TR(s.p1[n]) + TR(s.p1[n + 1]));
    });
    point("p1_telescoped_alpha_sum", "ortho", "algebraic", [](const CheckContext& c) {
      const auto& s = c.snap->sys;
      for (int n = 0; n <= c.n_check + 1; ++n) {
        TR d = TR(s.p1[n]);
        for (int j = 0; j < n; ++j) d += TR(s.alpha_rec[j]);
        c.add("p1_telescoped_alpha_sum", "ortho", "algebraic", n, d);
      }
    });
    point("hankel_det_product", "ortho", "hankel", [](const CheckContext& c) {
      const auto& s = c.snap->sys;
      const MomentTable& mu = c.snap->table(kPlainShift);
      for (int n = 0; n <= c.n_check + 1; ++n) {
        const Real oracle = hankel_det_oracle(mu, n, c.ctx);
        c.add_value("hankel_det_product", "ortho", "hankel", n,
                    Real(boost::multiprecision::abs(oracle - s.D[n]) / oracle),
                    "relative, fraction-free elimination at +64 bits");
      }
    });
    point("support_bounds", "ortho", "property", [](const CheckContext& c) {
      const auto& s = c.snap->sys;
      for (int n = 0; n <= c.n_check; ++n) {
        bool ok = s.alpha_rec[n] > 0 && s.alpha_rec[n] < 1;
        if (n >= 1) ok = ok && s.beta_rec[n] > 0 && s.beta_rec[n] <= Real("0.25");
        c.add_value("support_bounds", "ortho", "property", n, Real(ok ? 0 : 1),
                    "alpha_n in (0,1), beta_n in (0,1/4]");
      }
    });
    point("integration_by_parts", "ortho", "quadrature", [](const CheckContext& c) {
      const auto& sys = c.snap->sys;
      const WeightParams& p = c.params;
      const int top = c.n_check;
      auto f = [&](const Real& x, const Real& xc, std::span<Real> out) {
        const Real w = weight_with_complement(p, x, xc);
        const Real k1 = (p.alpha * x + p.t) / (x * x);
        const Real k2 = -p.beta / xc;
        std::vector<Real> vals;
        detail::poly_values_real(sys, top, x, vals);
        for (int n = 0; n <= top; ++n) {
          const Real sq = vals[n] * vals[n] * w;
          out[2 * static_cast<std::size_t>(n)] = sq * k1;
          out[2 * static_cast<std::size_t>(n) + 1] = sq * k2;
        }
      };
      QuadVectorResult q = de_quad_vec(f, 2 * static_cast<std::size_t>(top + 1), Interval::unit, c.ctx);
      for (int n = 0; n <= top; ++n) {
        const TR a(q.values[2 * n]), b(q.values[2 * n + 1]);
        c.add("integration_by_parts", "ortho", "quadrature", n, a + b,
              "int P_n^2 w (alpha y + t)/y^2 = -beta int P_n^2 w/(y-1)");
      }
    });

    // ---------------- ladder
    struct LadderData {
      std::vector<Complex> zs;
    };
    auto ladder = [](const CheckContext& c, const std::string& name, int n_min,
                     const std::function<TC(const Complex&, int)>& f) {
      const auto zs = sample_points(8, kLadderSeed);
      for (int n = n_min; n <= c.n_check; ++n) {
        auto w = detail::worst_over(zs, c.floor(), [&](const Complex& z) { return f(z, n); });
        detail::add_worst(c, name, "ladder", "algebraic", n, w);
      }
    };
    point("ladder_lowering", "ladder", "algebraic", [ladder](const CheckContext& c) {
      const auto& s = c.snap->sys;
      const auto& a = c.snap->aux;
      ladder(c, "ladder_lowering", 0, [&](const Complex& z, int n) {
        const PolyValue pn = poly_eval(s, n, z);
        const LadderCoeffs ab = an_bn_eval(a, n, z);
        TC d = TC(pn.derivative) + TC(ab.B) * TC(pn.value);
        if (n >= 1) d -= TC(Complex(s.beta_rec[n])) * TC(ab.A) * TC(poly_eval(s, n - 1, z).value);
        return d;
      });
    });
    point("ladder_raising", "ladder", "algebraic", [ladder](const CheckContext& c) {
      const auto& s = c.snap->sys;
      const auto& a = c.snap->aux;
      ladder(c, "ladder_raising", 1, [&](const Complex& z, int n) {
        const PolyValue pm = poly_eval(s, n - 1, z);
        const TC vp(v_prime_eval(c.params, z));
        return TC(pm.derivative) - (TC(an_bn_eval(a, n, z).B) + vp) * TC(pm.value) +
               TC(an_bn_eval(a, n - 1, z).A) * TC(poly_eval(s, n, z).value);
      });
    });
    point("compat_s1", "ladder", "algebraic", [ladder](const CheckContext& c) {
      const auto& s = c.snap->sys;
      const auto& a = c.snap->aux;
      ladder(c, "compat_s1", 0, [&](const Complex& z, int n) {
        const TC vp(v_prime_eval(c.params, z));
        return TC(an_bn_eval(a, n + 1, z).B) + TC(an_bn_eval(a, n, z).B) -
               (TC(z) - TC(Complex(s.alpha_rec[n]))) * TC(an_bn_eval(a, n, z).A) + vp;
      });
    });
    point("compat_s2", "ladder", "algebraic", [ladder](const CheckContext& c) {
      const auto& s = c.snap->sys;
      const auto& a = c.snap->aux;
      ladder(c, "compat_s2", 0, [&](const Complex& z, int n) {
        TC d = TC(1) + (TC(z) - TC(Complex(s.alpha_rec[n]))) *
                           (TC(an_bn_eval(a, n + 1, z).B) - TC(an_bn_eval(a, n, z).B)) -
               TC(Complex(s.beta_rec[n + 1])) * TC(an_bn_eval(a, n + 1, z).A);
        if (n >= 1) d += TC(Complex(s.beta_rec[n])) * TC(an_bn_eval(a, n - 1, z).A);
        return d;
      });
    });
    point("compat_s2_prime", "ladder", "algebraic", [ladder](const CheckContext& c) {
      const auto& s = c.snap->sys;
      const auto& a = c.snap->aux;
      ladder(c, "compat_s2_prime", 1, [&](const Complex& z, int n) {
        const TC vp(v_prime_eval(c.params, z));
        const TC B(an_bn_eval(a, n, z).B);
        TC d = B * B + vp * B;
        for (int j = 0; j < n; ++j) d += TC(an_bn_eval(a, j, z).A);
        d -= TC(Complex(s.beta_rec[n])) * TC(an_bn_eval(a, n, z).A) * TC(an_bn_eval(a, n - 1, z).A);
        return d;
      });
    });
    auto pf_oracle = [](const CheckContext& c, bool want_a) {
      const std::vector<Complex> zs{Complex(2), Complex(-1), Complex(Real("0.5"), Real(2))};
      const int top = std::min(c.n_check, 3);
      for (int n = 0; n <= top; ++n) {
        Real worst = -1;
        Complex at;
        for (const auto& z : zs) {
          const LadderOracle o = an_bn_oracle(c.snap->sys, n, z, c.ctx);
          const LadderCoeffs pf = an_bn_eval(c.snap->aux, n, z);
          const auto& a = c.snap->aux;
          const Real iz = 1 / abs(z);
          const Real izm1 = 1 / abs(z - Complex(1));
          Real mag = want_a ? Real(boost::multiprecision::abs(a.Rstar[n]) * iz * iz + a.R[n] * (iz + izm1))
                            : Real(boost::multiprecision::abs(a.rstar[n]) * iz * iz +
                                   boost::multiprecision::abs(n - a.r[n]) * iz +
                                   boost::multiprecision::abs(a.r[n]) * izm1);
          const Real diff = want_a ? abs(o.value.A - pf.A) : abs(o.value.B - pf.B);
          const Real res = diff / (mag + c.floor());
          if (res > worst) {
            worst = res;
            at = z;
          }
        }
        const std::string name = want_a ? "an_partial_fractions" : "bn_partial_fractions";
        ResidualReport r = c.base(name, "ladder", "quadrature", n);
        r.residual = worst;
        r.z = at;
        r.notes = "defining integral by quadrature vs partial fractions, worst of z in {2, -1, 1/2+2i}";
        c.push(std::move(r));
      }
    };
    point("an_partial_fractions", "ladder", "quadrature",
          [pf_oracle](const CheckContext& c) { pf_oracle(c, true); });
    point("bn_partial_fractions", "ladder", "quadrature",
          [pf_oracle](const CheckContext& c) { pf_oracle(c, false); });

    // ---------------- difference
    auto diff_check = [&point](const std::string& name, int n_min, int top_offset,
                               std::function<TR(const CheckContext&, int)> f) {
      point(name, "difference", "algebraic", [name, n_min, top_offset, f](const CheckContext& c) {
        for (int n = n_min; n <= c.n_check + top_offset; ++n) c.add(name, "difference", "algebraic", n, f(c, n));
      });
    };
    diff_check("rstar_pair_sum", 0, 0, [](const CheckContext& c, int n) {
      const auto& a = c.snap->aux;
      return TR(a.rstar[n + 1]) + TR(a.rstar[n]) - TR(c.params.t) + TR(c.snap->sys.alpha_rec[n]) * TR(a.Rstar[n]);
    });
    diff_check("Rstar_minus_R", 0, 0, [](const CheckContext& c, int n) {
      const auto& a = c.snap->aux;
      return TR(a.Rstar[n]) - TR(a.R[n]) + TR(Real(c.params.c(n) + 1));
    });
    diff_check("r_pair_sum", 0, 0, [](const CheckContext& c, int n) {
      const auto& a = c.snap->aux;
      return TR(a.r[n + 1]) + TR(a.r[n]) - (TR(1) - TR(c.snap->sys.alpha_rec[n])) * TR(a.R[n]) + TR(c.params.beta);
    });
    diff_check("rstar_quadratic", 1, 0, [](const CheckContext& c, int n) {
      const auto& a = c.snap->aux;
      const TR rs(a.rstar[n]);
      return rs * rs - TR(c.params.t) * rs - TR(c.snap->sys.beta_rec[n]) * TR(a.Rstar[n]) * TR(a.Rstar[n - 1]);
    });
    diff_check("r_quadratic", 1, 0, [](const CheckContext& c, int n) {
      const auto& a = c.snap->aux;
      const TR r(a.r[n]);
      return r * r + TR(c.params.beta) * r - TR(c.snap->sys.beta_rec[n]) * TR(a.R[n]) * TR(a.R[n - 1]);
    });
    diff_check("mixed_quadratic", 1, 0, [](const CheckContext& c, int n) {
      const auto& a = c.snap->aux;
      const TR rs(a.rstar[n]), r(a.r[n]), t(c.params.t);
      return (t - TR(2) * rs) * (TR(n) - r) - TR(c.params.alpha) * rs -
             TR(c.snap->sys.beta_rec[n]) * (TR(a.Rstar[n]) * TR(a.R[n - 1]) + TR(a.Rstar[n - 1]) * TR(a.R[n]));
    });
    diff_check("Rstar_partial_sum", 0, 0, [](const CheckContext& c, int n) {
      const auto& a = c.snap->aux;
      TR sum = 0;
      for (int j = 0; j < n; ++j) sum += TR(a.Rstar[j]);
      return sum - TR(n) * (TR(c.params.t) - TR(c.params.alpha) - TR(n)) +
             TR(c.params.c(n)) * (TR(a.rstar[n]) - TR(a.r[n]));
    });
    diff_check("r_difference", 0, 0, [](const CheckContext& c, int n) {
      const auto& a = c.snap->aux;
      return -TR(a.r[n + 1]) + TR(a.r[n]) + TR(a.rstar[n + 1]) - TR(a.rstar[n]) + TR(c.snap->sys.alpha_rec[n]);
    });
    diff_check("p1_from_r", 0, 1, [](const CheckContext& c, int n) {
      const auto& a = c.snap->aux;
      return TR(a.rstar[n]) - TR(a.r[n]) - TR(c.snap->sys.p1[n]);
    });

    // ---------------- recurrence
    auto rec_check = [&point](const std::string& name, int n_min, std::function<TR(const CheckContext&, int)> f) {
      point(name, "recurrence", "discrete", [name, n_min, f](const CheckContext& c) {
        for (int n = n_min; n <= c.n_check; ++n) c.add(name, "recurrence", "discrete", n, f(c, n));
      });
    };
    rec_check("alpha_from_aux", 0, [](const CheckContext& c, int n) {
      const auto& a = c.snap->aux;
      const auto& p = c.params;
      return TR(Real(p.c(n) + 2)) * TR(c.snap->sys.alpha_rec[n]) -
             (TR(2) * (TR(a.rstar[n]) - TR(a.r[n])) + TR(a.R[n]) - TR(p.beta) - TR(p.t));
    });
    rec_check("beta_from_aux", 1, [](const CheckContext& c, int n) {
      const auto& a = c.snap->aux;
      const auto& p = c.params;
      const TR cc(p.c(n)), rs(a.rstar[n]), r(a.r[n]), t(p.t);
      return (TR(1) - cc * cc) * TR(c.snap->sys.beta_rec[n]) -
             (-((rs - r) * (rs - r)) - (TR(p.beta) + t) * r + (t - TR(p.alpha) - TR(2 * n)) * rs + TR(n) * t);
    });
    rec_check("H_from_p1", 0, [](const CheckContext& c, int n) {
      const auto& p = c.params;
      return TR(c.snap->aux.H[n]) -
             (TR(p.c(n)) * TR(c.snap->sys.p1[n]) + TR(n) * (TR(n) + TR(p.alpha) - TR(p.t)));
    });
    rec_check("R_from_H", 0, [](const CheckContext& c, int n) {
      const auto& a = c.snap->aux;
      return TR(a.R[n]) - (TR(a.H[n]) - TR(a.H[n + 1]) + TR(Real(c.params.c(n) + 1)));
    });
    rec_check("R_from_p1", 0, [](const CheckContext& c, int n) {
      const auto& p = c.params;
      const auto& s = c.snap->sys;
      return TR(c.snap->aux.R[n]) - (TR(p.c(n)) * TR(s.p1[n]) - TR(Real(p.c(n) + 2)) * TR(s.p1[n + 1]) +
                                      TR(p.t) + TR(p.beta));
    });
    rec_check("r_from_p1", 1, [](const CheckContext& c, int n) {
      const auto& p = c.params;
      const auto& s = c.snap->sys;
      const TR cc(p.c(n)), p1(s.p1[n]), t(p.t);
      return cc * TR(c.snap->aux.r[n]) -
             (-(p1 * p1) - (TR(2 * n) + TR(p.alpha) - t) * p1 + TR(n) * t - (TR(1) - cc * cc) * TR(s.beta_rec[n]));
    });
    point("beta_from_p1", "recurrence", "discrete", [](const CheckContext& c) {
      const auto& p = c.params;
      const auto& s = c.snap->sys;
      for (int n = 1; n <= c.n_check; ++n) {
        const TR cc(p.c(n)), p0(s.p1[n]), pp(s.p1[n + 1]), pm(s.p1[n - 1]), t(p.t), a(p.alpha), b(p.beta);
        const TR X = (-(TR(2) * p0 * p0 * p0) + (TR(3) * t - a + TR(2) * b - TR(2 * n)) * p0 * p0 -
                      (t * t - TR(2) * (TR(n) - b) * t - (TR(2 * n) + a) * b) * p0 - (t + b) * TR(n) * t) /
                     cc;
        const TR Y = (cc - TR(1)) * (cc + TR(1)) + TR(2) / cc * p0 + (cc - TR(1)) * (cc + TR(2)) * pp -
                     (cc + TR(1)) * (cc - TR(2)) * pm - (t + b) * (TR(1) / cc + cc);
        if (detail::singular(Y, c.ctx.working_bits)) {
          ResidualReport r = c.base("beta_from_p1", "recurrence", "discrete", n);
          r.residual = 0;
          r.notes = "Y_n vanishes: singular point";
          c.push(std::move(r), Status::inconclusive);
          continue;
        }
        c.add("beta_from_p1", "recurrence", "discrete", n, TR(s.beta_rec[n]) - X / Y, "beta_n = X_n / Y_n");
      }
    });

    // ---------------- discrete
    point("discrete_sigma_form", "discrete", "discrete", [](const CheckContext& c) {
      const auto& a = c.snap->aux;
      for (int n = 1; n <= c.n_check; ++n) {
        auto [d, Z] = detail::discrete_sigma_residual(c.params, n, TR(a.Htil[n - 1]), TR(a.Htil[n]), TR(a.Htil[n + 1]));
        if (detail::singular(Z, c.ctx.working_bits)) {
          ResidualReport r = c.base("discrete_sigma_form", "discrete", "discrete", n);
          r.residual = 0;
          r.notes = "Z_n vanishes: singular point";
          c.push(std::move(r), Status::inconclusive);
          continue;
        }
        c.add("discrete_sigma_form", "discrete", "discrete", n, d, "H~ from -sum R*_j");
      }
    });

    // ---------------- t0
    auto t0_check = [&point](const std::string& name, int n_min, std::function<std::pair<Real, Real>(const CheckContext&, int)> f) {
      point(
          name, "t0", "t0",
          [name, n_min, f](const CheckContext& c) {
            for (int n = n_min; n <= c.n_check; ++n) {
              auto [got, want] = f(c, n);
              c.add_value(name, "t0", "t0", n, Real(boost::multiprecision::abs(got - want) / boost::multiprecision::abs(want)),
                          "relative; closed form " + detail::fmt_short(want));
            }
          },
          false, false, true);
    };
    t0_check("t0_alpha", 0, [](const CheckContext& c, int n) {
      return std::pair<Real, Real>{c.snap->sys.alpha_rec[n], t0_alpha(c.params, n)};
    });
    t0_check("t0_beta", 1, [](const CheckContext& c, int n) {
      return std::pair<Real, Real>{c.snap->sys.beta_rec[n], t0_beta(c.params, n)};
    });
    t0_check("t0_R", 0, [](const CheckContext& c, int n) {
      return std::pair<Real, Real>{c.snap->aux.R[n], t0_R(c.params, n)};
    });
    t0_check("t0_r", 1, [](const CheckContext& c, int n) {
      return std::pair<Real, Real>{c.snap->aux.r[n], t0_r(c.params, n)};
    });
    auto classical = [](const CheckContext& c) {
      const int N = c.opt->classical_n;
      const PrecisionCtx ctx = PrecisionCtx::for_degree(N);
      PrecisionScope scope(ctx.working_bits);
      const WeightParams p{rebind(c.params.alpha), rebind(c.params.beta), Real(0)};
      const auto tabs = moment_table(p, 2 * N + 1, std::vector<MomentShift>{kPlainShift}, ctx, false);
      const OrthoSystem sys = build_ortho(tabs[0], N, ctx);
      const Real half("0.5"), sixteenth("0.0625");
      CheckContext cc = c;
      cc.params = p;
      cc.ctx = ctx;
      const std::string bits = std::to_string(ctx.working_bits) + " bits";
      cc.add_value("t0_classical_alpha", "t0", "classical", N,
                   Real(boost::multiprecision::abs(sys.alpha_rec[N] - half)), "|alpha_n(0) - 1/2|, " + bits);
      cc.add_value("t0_classical_beta", "t0", "classical", N,
                   Real(boost::multiprecision::abs(sys.beta_rec[N] - sixteenth)), "|beta_n(0) - 1/16|, " + bits);
      // |alpha_n - 1/2| and |beta_n - 1/16| non-increasing in n (n >= 1)
      Real worst = 0;
      int at = 0;
      for (int n = 1; n < N; ++n) {
        const Real da = boost::multiprecision::abs(sys.alpha_rec[n + 1] - half) - boost::multiprecision::abs(sys.alpha_rec[n] - half);
        const Real db = boost::multiprecision::abs(sys.beta_rec[n + 1] - sixteenth) - boost::multiprecision::abs(sys.beta_rec[n] - sixteenth);
        if (da > worst) worst = da, at = n;
        if (db > worst) worst = db, at = n;
      }
      cc.add_value("t0_monotone_approach", "t0", "algebraic", at, worst,
                   "largest increase of |alpha_n - 1/2| or |beta_n - 1/16| over 1 <= n < " + std::to_string(N));
    };
    params("t0_classical_alpha", "t0", "classical", classical, false, true);
    params("t0_classical_beta", "t0", "classical", [](const CheckContext&) {}, false, true);
    params("t0_monotone_approach", "t0", "algebraic", [](const CheckContext&) {}, false, true);

    // ---------------- kummer
    point(
        "alpha0_kummer_ratio", "kummer", "kummer",
        [](const CheckContext& c) {
          const KummerRatios k = kummer_n0(c.params, c.ctx);
          c.add("alpha0_kummer_ratio", "kummer", "kummer", 0, TR(c.snap->sys.alpha_rec[0]) - TR(k.alpha0),
                "U(1+b,-a-1,t)/U(1+b,-a,t) = " + detail::fmt_short(k.alpha0));
          c.add("R0_kummer_ratio", "kummer", "kummer", 0, TR(c.snap->aux.R[0]) - TR(k.R0),
                "U(b,-a,t)/U(1+b,-a,t) = " + detail::fmt_short(k.R0));
        },
        true);
    point("R0_kummer_ratio", "kummer", "kummer", [](const CheckContext&) {}, true);
    auto r0_at = [](const CheckContext& c, const std::string& t) {
      PrecisionScope scope(c.ctx.working_bits);
      const WeightParams p{rebind(c.params.alpha), rebind(c.params.beta), Real(t)};
      const Snapshot s = build_snapshot(p, 0, c.ctx, true);
      return std::pair<WeightParams, Real>{p, s.aux.R[0]};
    };
    params(
        "R0_large_t", "kummer", "asymptotic",
        [r0_at](const CheckContext& c) {
          PrecisionScope scope(c.ctx.working_bits);
          std::vector<Real> lin, quad;
          std::string notes;
          for (const auto& ts : c.opt->large_t) {
            auto [p, R0] = r0_at(c, ts);
            const Real rho = r0_large_t_remainder(p, R0);
            lin.push_back(p.t * rho);
            quad.push_back(p.t * p.t * rho);
            notes += "t=" + ts + ": t*rem=" + detail::fmt_short(lin.back()) + " t^2*rem=" + detail::fmt_short(quad.back()) + "; ";
          }
          // t^2 * remainder at the two largest t within a factor 4
          const std::size_t m = quad.size();
          Real ratio = 1e300;
          if (m >= 2) {
            const Real x = boost::multiprecision::abs(quad[m - 1]), y = boost::multiprecision::abs(quad[m - 2]);
            const Real lo = x < y ? x : y, hi = x < y ? y : x;
            ratio = lo > 0 ? Real(hi / lo) : Real(1e300);
          }
          CheckContext cc = c;
          cc.params.t = Real(c.opt->large_t.back());
          cc.add_value("R0_large_t", "kummer", "asymptotic", 0, ratio, "ratio of t^2*rem at the two largest t; " + notes);
          // t * remainder shrinks along the probe (bounded, O(1/t))
          bool shrinking = true;
          for (std::size_t i = 1; i < lin.size(); ++i)
            shrinking = shrinking && boost::multiprecision::abs(lin[i]) <= boost::multiprecision::abs(lin[i - 1]);
          cc.add_value("R0_large_t_bounded", "kummer", "property", 0, Real(shrinking ? 0 : 1),
                       "|t*rem| non-increasing over the probe");
        },
        true, false);
    params("R0_large_t_bounded", "kummer", "property", [](const CheckContext&) {}, true, false);
    params(
        "R0_small_t", "kummer", "continuity",
        [r0_at](const CheckContext& c) {
          PrecisionScope scope(c.ctx.working_bits);
          auto [p, R0] = r0_at(c, c.opt->small_t);
          CheckContext cc = c;
          cc.params.t = p.t;
          cc.add_value("R0_small_t", "kummer", "continuity", 0,
                       Real(boost::multiprecision::abs(R0 - (1 + p.alpha + p.beta))),
                       "|R_0(t) - (1 + alpha + beta)|, R_0 = " + detail::fmt_short(R0));
        },
        true, false);

    // ---------------- toda
    point("toda_alpha", "toda", "toda", [](const CheckContext& c) { detail::toda_report(c, "toda_alpha", TodaKind::alpha); }, true, true);
    point("toda_beta", "toda", "toda", [](const CheckContext& c) { detail::toda_report(c, "toda_beta", TodaKind::beta); }, true, true);
    point("p1_t_derivative", "toda", "toda", [](const CheckContext& c) { detail::toda_report(c, "p1_t_derivative", TodaKind::p1); }, true, true);
    point("log_hankel_t_derivative", "toda", "toda",
          [](const CheckContext& c) { detail::toda_report(c, "log_hankel_t_derivative", TodaKind::log_hankel); }, true, true);
    point("r_t_derivatives", "toda", "toda", [](const CheckContext& c) { detail::toda_report(c, "r_t_derivatives", TodaKind::r_pair); }, true, true);
    point(
        "toda_convergence", "toda", "convergence",
        [](const CheckContext& c) {
          if (!c.refine || c.refine->size() < 2) return;
          const std::vector<std::pair<std::string, TodaKind>> kinds{{"toda_alpha", TodaKind::alpha},
                                                                    {"toda_beta", TodaKind::beta},
                                                                    {"p1_t_derivative", TodaKind::p1},
                                                                    {"log_hankel_t_derivative", TodaKind::log_hankel}};
          PrecisionScope scope(c.ctx.working_bits);
          const Real noise = pow10_real(-static_cast<int>(c.ctx.working_bits / 3));
          for (int n = 1; n <= c.n_check; ++n) {
            for (const auto& [name, kind] : kinds) {
              std::vector<Real> err, h;
              Real mag = 0;
              for (const auto& f : *c.refine) {
                detail::StencilEval e = detail::toda_eval(f, kind, n);
                err.push_back(boost::multiprecision::abs(e.diff.v));
                h.push_back(f.stencil.h);
                mag = e.diff.m;
              }
              std::ostringstream notes;
              notes << name << " orders:";
              Real worst = 0;
              bool resolved = true;
              for (std::size_t i = 0; i + 1 < err.size(); ++i) {
                if (!(err[i + 1] > noise * mag)) {
                  resolved = false;
                  break;
                }
                const Real order = boost::multiprecision::log(err[i] / err[i + 1]) / boost::multiprecision::log(h[i] / h[i + 1]);
                notes << ' ' << detail::fmt_short(order);
                const Real dev = boost::multiprecision::abs(order - 4);
                if (dev > worst) worst = dev;
              }
              if (!resolved) {
                c.add_value("toda_convergence", "toda", "convergence", n, Real(0),
                            name + ": error at the finest step is at the rounding floor", Status::inconclusive);
                continue;
              }
              c.add_value("toda_convergence", "toda", "convergence", n, worst, notes.str());
            }
          }
        },
        true, true);

    // ---------------- sigma
    auto hpp_of = [](const CheckContext& c, int n) {
      return c.fam->derivative([n](const Snapshot& x) { return x.aux.Hprime[n]; }, 1).value;
    };
    point(
        "sigma_form", "sigma", "stencil1",
        [hpp_of](const CheckContext& c) {
          const auto& a = c.snap->aux;
          const auto& p = c.params;
          for (int n = 0; n <= c.n_check; ++n) {
            const TR H(a.H[n]), Hp(a.Hprime[n]), Hpp(hpp_of(c, n)), t(p.t), al(p.alpha), be(p.beta);
            const TR lin = TR(Real(n * (n + p.alpha + p.beta))) - H + (al + t) * Hp;
            const TR d = (t * Hpp) * (t * Hpp) - (lin * lin + TR(4) * Hp * (t * Hp - H) * (be - Hp));
            c.add("sigma_form", "sigma", "stencil1", n, d, "H'' by stencil over the exact H'");
          }
        },
        true, true);
    point(
        "sigma_form_shifted", "sigma", "stencil1",
        [hpp_of](const CheckContext& c) {
          const auto& a = c.snap->aux;
          const auto& p = c.params;
          for (int n = 0; n <= c.n_check; ++n) {
            const TR G(a.Htil[n]), Gp(a.Hprime[n]), Gpp(hpp_of(c, n)), t(p.t), al(p.alpha), be(p.beta);
            const TR k = al + TR(2) * be + t;
            const TR nn = TR(Real(n * (n + p.alpha + p.beta)));
            const TR rhs = -(TR(4) * t * Gp * Gp * Gp) +
                           Gp * Gp * (TR(4) * G + k * k + TR(4) * nn - TR(4) * be * (al + be)) +
                           TR(2) * Gp * (-(k * G) - TR(2) * be * nn) + G * G;
            c.add("sigma_form_shifted", "sigma", "stencil1", n, (t * Gpp) * (t * Gpp) - rhs, "H~ = H - n(n+a+b)");
          }
        },
        true, true);
    point(
        "rstar_from_H", "sigma", "stencil1",
        [](const CheckContext& c) {
          const auto& p = c.params;
          for (int n = 0; n <= c.n_check; ++n) {
            const FdEstimate hp = c.fam->derivative([n](const Snapshot& x) { return x.aux.H[n]; }, 1);
            const TR t(p.t);
            c.add("rstar_from_H", "sigma", "stencil1", n,
                  TR(p.c(n)) * TR(c.snap->aux.rstar[n]) - (TR(n) * t + t * TR(hp.value)),
                  "H' by stencil over H = -sum R*_j");
          }
        },
        true, true);
    point(
        "r_from_H", "sigma", "algebraic",
        [](const CheckContext& c) {
          const auto& p = c.params;
          const auto& a = c.snap->aux;
          for (int n = 0; n <= c.n_check; ++n)
            c.add("r_from_H", "sigma", "algebraic", n,
                  TR(p.c(n)) * TR(a.r[n]) - (TR(Real(n * (n + p.alpha))) + TR(p.t) * TR(a.Hprime[n]) - TR(a.H[n])),
                  "exact H' = -n + (2n+a+b) r*_n / t");
        },
        true);
    auto rprime_of = [](const CheckContext& c, int n) {
      return c.fam->derivative([n](const Snapshot& x) { return x.aux.r[n]; }, 1).value;
    };
    point(
        "r_derivative_product", "sigma", "stencil1",
        [rprime_of](const CheckContext& c) {
          const auto& p = c.params;
          const auto& a = c.snap->aux;
          for (int n = 0; n <= c.n_check; ++n) {
            const TR t(p.t), r(a.r[n]), rs(a.rstar[n]), rp(rprime_of(c, n)), cc(p.c(n));
            const TR lin = TR(Real(2 * n + p.alpha)) * rs - TR(n) * t;
            const TR rhs = t * t * r * r +
                           TR(2) * r * (-(TR(2) * cc * rs * rs) + TR(Real(4 * n + p.alpha + 2 * p.beta)) * t * rs - TR(n) * t * t) +
                           lin * lin;
            c.add("r_derivative_product", "sigma", "stencil1", n, t * t * rp * rp - rhs, "r' by stencil");
          }
        },
        true, true);
    point(
        "R_quadratic_static", "sigma", "algebraic",
        [](const CheckContext& c) {
          const auto& p = c.params;
          const auto& a = c.snap->aux;
          for (int n = 0; n <= c.n_check; ++n) {
            const TR t(p.t), r(a.r[n]), rs(a.rstar[n]), R(a.R[n]), C(Real(p.c(n) + 1)), b(p.beta);
            const TR lhs = C / R * (r * r + b * r) +
                           R / C * ((rs - r) * (rs - r) + TR(Real(2 * n + p.alpha)) * rs - t * rs + (b + t) * r - TR(n) * t);
            const TR rhs = TR(2) * r * r + (t + TR(2) * b - TR(2) * rs) * r + TR(Real(2 * n + p.alpha)) * rs - TR(n) * t;
            c.add("R_quadratic_static", "sigma", "algebraic", n, lhs - rhs);
          }
        },
        true);
    point(
        "R_quadratic_dynamic", "sigma", "stencil1",
        [rprime_of](const CheckContext& c) {
          const auto& p = c.params;
          const auto& a = c.snap->aux;
          for (int n = 0; n <= c.n_check; ++n) {
            const TR t(p.t), r(a.r[n]), rs(a.rstar[n]), R(a.R[n]), cc(p.c(n)), b(p.beta), rp(rprime_of(c, n));
            const TR lhs = (TR(1) - cc * cc) / R * (r * r + b * r) +
                           ((rs - r) * (rs - r) - t * (rs - r) + b * r + TR(Real(2 * n + p.alpha)) * rs - TR(n) * t) * R;
            const TR rhs = TR(2) * r * r + (t + TR(2) * b - TR(2) * rs) * r + TR(Real(2 * n + p.alpha)) * rs - TR(n) * t -
                           cc * t * rp;
            c.add("R_quadratic_dynamic", "sigma", "stencil1", n, lhs - rhs, "r' by stencil");
          }
        },
        true, true);
    point(
        "R_representation", "sigma", "stencil1",
        [rprime_of](const CheckContext& c) {
          const auto& p = c.params;
          const auto& a = c.snap->aux;
          for (int n = 1; n <= c.n_check; ++n) {
            const TR t(p.t), r(a.r[n]), rs(a.rstar[n]), R(a.R[n]), C(Real(p.c(n) + 1)), b(p.beta), rp(rprime_of(c, n));
            const TR num = TR(2) * r * r + (t + TR(2) * b - TR(2) * rs) * r + TR(Real(2 * n + p.alpha)) * rs - TR(n) * t - t * rp;
            const TR den = TR(2) * ((rs - r) * (rs - r) + (TR(Real(2 * n + p.alpha)) - t) * rs + (b + t) * r - TR(n) * t);
            if (detail::singular(den, c.ctx.working_bits)) {
              c.add_value("R_representation", "sigma", "stencil1", n, Real(0), "denominator vanishes", Status::inconclusive);
              continue;
            }
            c.add("R_representation", "sigma", "stencil1", n, R - C * num / den, "r' by stencil");
          }
        },
        true, true);
    point(
        "R_inverse_representation", "sigma", "stencil1",
        [rprime_of](const CheckContext& c) {
          const auto& p = c.params;
          const auto& a = c.snap->aux;
          for (int n = 1; n <= c.n_check; ++n) {
            const TR t(p.t), r(a.r[n]), rs(a.rstar[n]), R(a.R[n]), C(Real(p.c(n) + 1)), b(p.beta), rp(rprime_of(c, n));
            const TR num = TR(2) * r * r + (t + TR(2) * b - TR(2) * rs) * r + TR(Real(2 * n + p.alpha)) * rs - TR(n) * t + t * rp;
            const TR den = TR(2) * C * (b + r) * r;
            c.add("R_inverse_representation", "sigma", "stencil1", n, TR(1) / R - num / den, "r' by stencil");
          }
        },
        true, true);

    // ---------------- riccati
    auto rprime_R = [](const CheckContext& c, int n, int order) {
      return c.fam->derivative([n](const Snapshot& x) { return x.aux.R[n]; }, order).value;
    };
    point(
        "R_riccati", "riccati", "riccati",
        [rprime_R](const CheckContext& c) {
          const auto& p = c.params;
          const auto& a = c.snap->aux;
          for (int n = 0; n <= c.n_check; ++n) {
            const TR t(p.t), r(a.r[n]), rs(a.rstar[n]), R(a.R[n]), C(Real(p.c(n) + 1)), b(p.beta), Rp(rprime_R(c, n, 1));
            const TR rhs = TR(2) * R * (rs - r) + C * (TR(2) * r - R + b) + (R - b - t) * R;
            c.add("R_riccati", "riccati", "riccati", n, t * Rp - rhs, "R' by stencil");
          }
        },
        true, true);
    point(
        "rstar_from_R", "riccati", "riccati",
        [rprime_R](const CheckContext& c) {
          const auto& p = c.params;
          const auto& a = c.snap->aux;
          for (int n = 0; n <= c.n_check; ++n) {
            const TR t(p.t), r(a.r[n]), rs(a.rstar[n]), R(a.R[n]), C(Real(p.c(n) + 1)), b(p.beta), Rp(rprime_R(c, n, 1));
            const TR rhs = (t * Rp - C * (TR(2) * r - R + b)) / (TR(2) * R) + r - (R - b - t) / TR(2);
            c.add("rstar_from_R", "riccati", "riccati", n, rs - rhs, "R' by stencil");
          }
        },
        true, true);
    auto fg = [rprime_R](const CheckContext& c, bool want_r) {
      const auto& a = c.snap->aux;
      for (int n = 1; n <= c.n_check; ++n) {
        const Real Rp = rprime_R(c, n, 1);
        auto [r, rp] = detail::solve_r_rprime(c.params, n, a.R[n], Rp);
        if (want_r) {
          c.add("r_from_R_Rprime", "riccati", "riccati", n, TR(r) - TR(a.r[n]),
                "(r, r') solved from the two representations of R_n");
        } else {
          const Real rp_fd = c.fam->derivative([n](const Snapshot& x) { return x.aux.r[n]; }, 1).value;
          c.add("rprime_from_R_Rprime", "riccati", "stencil1", n, TR(rp) - TR(rp_fd),
                "(r, r') solved from the two representations of R_n; r' by stencil");
        }
      }
    };
    point("r_from_R_Rprime", "riccati", "riccati", [fg](const CheckContext& c) { fg(c, true); }, true, true);
    point("rprime_from_R_Rprime", "riccati", "stencil1", [fg](const CheckContext& c) { fg(c, false); }, true, true);
    auto factors = [rprime_R](const CheckContext& c, int n) {
      const Real R = c.snap->aux.R[n];
      return detail::two_ode_factors(c.params, n, TR(R), TR(rprime_R(c, n, 1)), TR(rprime_R(c, n, 2)));
    };
    point(
        "two_ode_second_factor", "riccati", "two_ode",
        [factors](const CheckContext& c) {
          for (int n = 0; n <= c.n_check; ++n)
            c.add("two_ode_second_factor", "riccati", "two_ode", n, detail::sum_of(factors(c, n).second),
                  "R', R'' by stencil");
        },
        true, true);
    point(
        "two_ode_first_factor", "riccati", "nonvanishing",
        [factors](const CheckContext& c) {
          for (int n = 0; n <= c.n_check; ++n) {
            const TR f1 = factors(c, n).first;
            ResidualReport r = c.base("two_ode_first_factor", "riccati", "nonvanishing", n);
            const Real size = boost::multiprecision::abs(f1.v);
            r.residual = size > 0 ? Real(1 / size) : Real(1e300);
            r.notes = "1/|first factor|; the factor is " + detail::fmt_short(f1.v) + ", its term magnitude " +
                      detail::fmt_short(f1.m);
            // a vanishing factor makes the split inconclusive rather than wrong
            c.push(std::move(r), r.residual < r.tolerance ? Status::pass : Status::inconclusive);
          }
        },
        true, true);
    point(
        "two_ode_product", "riccati", "algebraic",
        [factors](const CheckContext& c) {
          for (int n = 0; n <= c.n_check; ++n) {
            auto [f1, terms] = factors(c, n);
            const TR product = f1 * detail::sum_of(terms);
            TR distributed = 0;
            for (const auto& term : terms) distributed += f1 * term;
            c.add("two_ode_product", "riccati", "algebraic", n, product - distributed,
                  "product of the factors vs the expanded left side");
          }
        },
        true, true);
    point(
        "painleve_v", "riccati", "stencil2",
        [rprime_R](const CheckContext& c) {
          const auto& p = c.params;
          for (int n = 0; n <= c.n_check; ++n) {
            const Real Cr = p.c(n) + 1;
            const TR C(Cr), t(p.t), a(p.alpha), b(p.beta);
            const TR S(Real(c.snap->aux.R[n] / Cr));
            const TR Sp(Real(rprime_R(c, n, 1) / Cr));
            const TR Spp(Real(rprime_R(c, n, 2) / Cr));
            const TR one(1);
            const TR rhs = (TR(3) * S - one) / (TR(2) * S * (S - one)) * Sp * Sp - Sp / t +
                           (S - one) * (S - one) / (t * t) * (C * C / TR(2) * S - b * b / (TR(2) * S)) + a * S / t -
                           S * (S + one) / (TR(2) * (S - one));
            c.add("painleve_v", "riccati", "stencil2", n, Spp - rhs, "S = R/(2n+1+a+b); S', S'' by stencil");
          }
        },
        true, true);

    // ---------------- p3
    params(
        "p3_limit", "p3", "p3",
        [](const CheckContext& c) {
          const SuiteOptions& o = *c.opt;
          const int n = o.p3_n;
          const PrecisionCtx ctx = c.ctx.working_bits >= PrecisionCtx::for_degree(n + 1).working_bits
                                       ? c.ctx
                                       : PrecisionCtx::for_degree(n + 1);
          PrecisionScope scope(ctx.working_bits);
          for (const auto& s_str : o.p3_s) {
            const Real s(s_str);
            std::vector<detail::P3Point> pts;
            for (const auto& b_str : o.p3_betas) pts.push_back(detail::p3_point(rebind(c.params.alpha), Real(b_str), s, n, ctx));
            CheckContext cc = c;
            cc.ctx = ctx;
            cc.params.t = s;
            cc.params.beta = pts.back().beta;
            std::string trail;
            for (std::size_t i = 0; i < pts.size(); ++i)
              trail += "beta=" + o.p3_betas[i] + ": " + detail::fmt_short(pts[i].residual) + "; ";
            cc.add_value("p3_limit", "p3", "p3", n, pts.back().residual,
                         "PIII sigma-form residual at the largest beta, t = s/beta (report t is s); " + trail);
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
              CheckContext dc = cc;
              dc.params.beta = pts[i + 1].beta;
              dc.add_value("p3_limit_decay", "p3", "p3_decay", n, Real(pts[i + 1].residual / pts[i].residual),
                           "residual ratio beta=" + o.p3_betas[i + 1] + " / beta=" + o.p3_betas[i]);
            }
          }
        },
        false, false);
    params("p3_limit_decay", "p3", "p3_decay", [](const CheckContext&) {}, false, false);
    return v;
  }();
  return reg;
}

/// Identities that must have an evaluator.  The suite refuses to run if
/// one of them is missing from the registry.
inline const std::vector<std::string>& required_identities() {
  static const std::vector<std::string> names{
      "moment_route_agreement", "moment_beta_closed_form", "moment_positivity", "orthogonality",
      "three_term_recurrence", "alpha_from_p1", "p1_telescoped_alpha_sum", "hankel_det_product", "support_bounds",
      "integration_by_parts", "ladder_lowering", "ladder_raising", "compat_s1", "compat_s2", "compat_s2_prime",
      "an_partial_fractions", "bn_partial_fractions", "rstar_pair_sum", "Rstar_minus_R", "r_pair_sum",
      "rstar_quadratic", "r_quadratic", "mixed_quadratic", "Rstar_partial_sum", "r_difference", "p1_from_r",
      "alpha_from_aux", "beta_from_aux", "H_from_p1", "R_from_H", "R_from_p1", "r_from_p1", "beta_from_p1",
      "discrete_sigma_form", "t0_alpha", "t0_beta", "t0_R", "t0_r", "t0_classical_alpha", "t0_classical_beta",
      "t0_monotone_approach", "alpha0_kummer_ratio", "R0_kummer_ratio", "R0_large_t", "R0_large_t_bounded",
      "R0_small_t", "toda_alpha", "toda_beta", "p1_t_derivative", "log_hankel_t_derivative", "r_t_derivatives",
      "toda_convergence", "sigma_form", "sigma_form_shifted", "rstar_from_H", "r_from_H", "r_derivative_product",
      "R_quadratic_static", "R_quadratic_dynamic", "R_representation", "R_inverse_representation", "R_riccati",
      "rstar_from_R", "r_from_R_Rprime", "rprime_from_R_Rprime", "two_ode_second_factor", "two_ode_first_factor",
      "two_ode_product", "painleve_v", "p3_limit", "p3_limit_decay"};
  return names;
}

/// Names in `required_identities()` without an evaluator, and evaluators
/// not listed there.
inline std::pair<std::vector<std::string>, std::vector<std::string>> coverage_gaps() {
  std::set<std::string> have;
  for (const auto& c : identity_registry()) have.insert(c.name);
  std::set<std::string> want(required_identities().begin(), required_identities().end());
  std::vector<std::string> missing, extra;
  for (const auto& w : want)
    if (!have.count(w)) missing.push_back(w);
  for (const auto& h : have)
    if (!want.count(h)) extra.push_back(h);
  return {missing, extra};
}

inline void coverage_lock() {
  auto [missing, extra] = coverage_gaps();
  if (missing.empty() && extra.empty()) return;
  std::string msg = "identity coverage lock:";
  for (const auto& m : missing) msg += " missing " + m;
  for (const auto& e : extra) msg += " unlisted " + e;
  throw std::logic_error(msg);
}

inline const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> s{"moments",    "ortho", "ladder", "difference", "recurrence", "discrete",
                                          "t0",         "kummer", "toda",  "sigma",      "riccati",    "p3"};
  return s;
}

/// Suites run when none are requested.  The PIII limit builds its own
/// large-beta pipelines and runs only on request.
inline std::vector<std::string> default_suites() {
  std::vector<std::string> s;
  for (const auto& x : all_suites())
    if (x != "p3") s.push_back(x);
  return s;
}

// ---------------------------------------------------------------------------
// Runner

namespace detail {

/// Runs `f`, re-raising numeric failures with `where` prefixed.
template <class F>
void with_context(const std::string& where, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const PrecisionError& e) {
    throw PrecisionError(where + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(where + ": " + e.what());
  }
}

}  // namespace detail

struct VerifyPlan {
  std::string alpha = "1";
  std::string beta = "1";
  std::vector<std::string> t_grid;
  /// Checks run for n = 0..n_max; the pipeline is built one degree higher.
  int n_max = 10;
  /// 0 selects max(192, 64 + 24 (n_max + 1)).
  unsigned bits = 0;
  std::set<std::string> suites;
  SuiteOptions options;
  /// Convergence-order measurement of the t-derivative checks.
  bool measure_convergence = true;
};

inline PrecisionCtx plan_ctx(const VerifyPlan& plan) {
  return plan.bits ? PrecisionCtx::with_bits(plan.bits) : PrecisionCtx::for_degree(plan.n_max + 1);
}

inline std::vector<ResidualReport> run_verify(const VerifyPlan& plan) {
  coverage_lock();
  if (plan.t_grid.empty()) throw ConfigError("t grid is empty");
  if (plan.n_max < 1) throw ConfigError("n_max must be >= 1");
  std::set<std::string> suites = plan.suites;
  if (suites.empty())
    for (const auto& s : default_suites()) suites.insert(s);
  for (const auto& s : suites)
    if (std::find(all_suites().begin(), all_suites().end(), s) == all_suites().end())
      throw ConfigError("unknown suite '" + s + "'");

  const PrecisionCtx ctx = plan_ctx(plan);
  PrecisionScope scope(ctx.working_bits);
  const WeightParams base = make_params(plan.alpha, plan.beta, "0");
  std::vector<ResidualReport> reports;

  auto selected = [&](const IdentityCheck& c) { return suites.count(c.suite) > 0; };
  bool want_family = false, want_refine = false;
  for (const auto& c : identity_registry())
    if (selected(c) && c.scope == IdentityCheck::Scope::point && c.needs_family) {
      want_family = true;
      if (c.suite == "toda" && plan.measure_convergence) want_refine = true;
    }

  bool any_zero = false, any_positive = false;
  for (const auto& ts : plan.t_grid) {
    const WeightParams p = base.at_t(Real(ts));
    p.validate();
    (p.t == 0 ? any_zero : any_positive) = true;
    std::shared_ptr<const Snapshot> snap;
    std::optional<TFamily> fam;
    std::vector<TFamily> refine;
    detail::with_context("pipeline at t = " + ts, [&] {
      snap = std::make_shared<const Snapshot>(build_snapshot(p, plan.n_max + 1, ctx, true));
      if (p.t > 0 && want_family) fam = build_family(snap, ctx);
      if (p.t > 0 && want_refine)
        for (double lg : plan.options.refine_log2) {
          PrecisionCtx coarse = ctx;
          coarse.fd_step_scale_log2 = lg;
          refine.push_back(build_family(snap, coarse));
        }
    });
    CheckContext c;
    c.params = p;
    c.ctx = ctx;
    c.opt = &plan.options;
    c.n_check = plan.n_max;
    c.snap = snap.get();
    c.fam = fam ? &*fam : nullptr;
    c.refine = &refine;
    c.out = &reports;
    for (const auto& chk : identity_registry()) {
      if (!selected(chk) || chk.scope != IdentityCheck::Scope::point) continue;
      if (chk.needs_t_positive && !(p.t > 0)) continue;
      if (chk.needs_t_zero && p.t != 0) continue;
      detail::with_context(chk.name + " at t = " + ts, [&] { chk.run(c); });
    }
  }

  CheckContext c;
  c.params = base;
  c.ctx = ctx;
  c.opt = &plan.options;
  c.n_check = plan.n_max;
  c.out = &reports;
  for (const auto& chk : identity_registry()) {
    if (!selected(chk) || chk.scope != IdentityCheck::Scope::params) continue;
    if (chk.needs_t_positive && !any_positive) continue;
    if (chk.needs_t_zero && !any_zero) continue;
    detail::with_context(chk.name, [&] { chk.run(c); });
  }
  std::stable_sort(reports.begin(), reports.end(), report_order);
  return reports;
}

}  // namespace pjlab
