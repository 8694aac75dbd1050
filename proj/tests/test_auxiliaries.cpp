#include "pjlab/closed_forms.hpp"
#include "pjlab/pipeline.hpp"

#include <gtest/gtest.h>

namespace pjlab {
namespace {

using boost::multiprecision::abs;

Snapshot snap(const char* a, const char* b, const char* t, int n_max, unsigned bits = 256) {
  PrecisionScope scope(bits);
  return build_snapshot(make_params(a, b, t), n_max, PrecisionCtx::with_bits(bits));
}

TEST(Aux, TZeroClosedForms) {
  PrecisionScope scope(256);
  auto s = snap("1", "1", "0", 3);
  EXPECT_LT(abs(s.aux.R[1] - 5), Real("1e-60"));
  EXPECT_LT(abs(s.aux.r[1] - Real("0.5")), Real("1e-60"));
  for (int n = 0; n <= 3; ++n) {
    EXPECT_EQ(s.aux.Rstar[n], 0);
    EXPECT_EQ(s.aux.rstar[n], 0);
    EXPECT_EQ(s.aux.H[n], 0);
  }
  EXPECT_TRUE(s.aux.Hprime.empty());
}

TEST(Aux, InitialConditions) {
  PrecisionScope scope(256);
  auto s = snap("1.5", "0.5", "2", 3);
  EXPECT_EQ(s.aux.r[0], 0);
  EXPECT_EQ(s.aux.rstar[0], 0);
  EXPECT_LT(abs(s.aux.Rstar[0] - s.aux.R[0] + (1 + s.params.alpha + s.params.beta)), Real("1e-60"));
  const auto hv = hn_from_aux(s.aux, 0);
  EXPECT_EQ(hv.H, 0);
  EXPECT_EQ(hv.Htil, 0);
  ASSERT_TRUE(hv.Hprime.has_value());
  EXPECT_EQ(*hv.Hprime, 0);
}

TEST(Aux, PositiveIntegrals) {
  PrecisionScope scope(256);
  auto s = snap("1", "1", "0.5", 5);
  for (int n = 0; n <= 5; ++n) {
    EXPECT_GT(s.aux.R[n], 0);
    EXPECT_GT(s.aux.Rstar[n], 0);
  }
}

// Reference values from an independent mpmath evaluation (80 digits).
TEST(Aux, PinnedValuesAtTOne) {
  PrecisionScope scope(256);
  auto s = snap("1", "1", "1", 3);
  EXPECT_LT(abs(s.aux.R[1] - Real("7.00566695956223915373596799345086117951602345")), Real("1e-43"));
  EXPECT_LT(abs(s.aux.r[1] - Real("0.575822092019058217719888715637081979631640986")), Real("1e-43"));
  EXPECT_LT(abs(s.aux.rstar[2] - Real("-0.146954997435385072820936791559837312573691724")), Real("1e-43"));
  EXPECT_LT(abs(s.aux.H[2] - Real("-3.64783370868480226383137993675267139430192324")), Real("1e-43"));
}

TEST(LadderCoeffs, BZeroVanishes) {
  PrecisionScope scope(256);
  auto s = snap("1", "1", "1", 2);
  for (const Complex& z : {Complex(2), Complex(-1), Complex(Real("0.5"), Real(3))}) {
    const auto ab = an_bn_eval(s.aux, 0, z);
    EXPECT_EQ(abs(ab.B), 0);
  }
  const auto o = an_bn_oracle(s.sys, 0, Complex(2), s.ctx);
  EXPECT_EQ(abs(o.value.B), 0);
}

TEST(LadderCoeffs, LeadingBehaviourAtInfinity) {
  PrecisionScope scope(256);
  auto s = snap("1", "1", "1", 3);
  const Complex z(Real("1e8"));
  for (int n = 0; n <= 3; ++n) {
    const Complex a = an_bn_eval(s.aux, n, z).A * (z.re * z.re);
    // z^2 A_n(z) = R*_n - R_n z/(z-1) -> R*_n - R_n = -(2n+1+alpha+beta)
    const Real limit = s.aux.Rstar[n] - s.aux.R[n];
    EXPECT_LT(abs(a.re - limit) / abs(limit), Real("1e-7")) << n;
    EXPECT_LT(abs(limit + (s.params.c(n) + 1)), Real("1e-60")) << n;
  }
}

TEST(LadderCoeffs, QuadratureOracleAgrees) {
  PrecisionScope scope(256);
  auto s = snap("1", "1", "1", 3);
  struct Case {
    int n;
    Complex z;
  };
  for (const Case& c : {Case{1, Complex(2)}, Case{2, Complex(-1)}}) {
    const auto pf = an_bn_eval(s.aux, c.n, c.z);
    const auto o = an_bn_oracle(s.sys, c.n, c.z, s.ctx);
    EXPECT_LT(abs(pf.A - o.value.A), o.A_bound + Real("1e-60")) << c.n;
    EXPECT_LT(abs(pf.B - o.value.B), o.B_bound + Real("1e-60")) << c.n;
  }
}

TEST(LadderCoeffs, PolesRejected) {
  PrecisionScope scope(256);
  auto s = snap("1", "1", "1", 1);
  EXPECT_THROW(an_bn_eval(s.aux, 1, Complex(0)), DomainError);
  EXPECT_THROW(an_bn_eval(s.aux, 1, Complex(1)), DomainError);
  EXPECT_THROW(an_bn_oracle(s.sys, 1, Complex(Real("0.5")), s.ctx), DomainError);
}

TEST(HankelDerivative, ExactHprimeMatchesStencil) {
  const auto ctx = PrecisionCtx::with_bits(256);
  PrecisionScope scope(ctx.working_bits);
  auto c = std::make_shared<const Snapshot>(build_snapshot(make_params("1", "1", "1"), 3, ctx));
  auto fam = build_family(c, ctx);
  for (int n = 0; n <= 3; ++n) {
    const auto d = fam.derivative([n](const Snapshot& s) { return s.aux.H[n]; }, 1);
    EXPECT_LT(abs(d.value - c->aux.Hprime[n]), 10 * d.error_proxy + Real("1e-50")) << n;
  }
}

TEST(HankelDerivative, LogDeterminantMatchesRstarSum) {
  const auto ctx = PrecisionCtx::with_bits(256);
  PrecisionScope scope(ctx.working_bits);
  auto c = std::make_shared<const Snapshot>(build_snapshot(make_params("1", "1", "1"), 3, ctx));
  auto fam = build_family(c, ctx);
  EXPECT_EQ(hankel_Hn(fam, 0).H, 0);
  for (int n = 1; n <= 3; ++n) {
    const auto hd = hankel_Hn(fam, n);
    EXPECT_LT(abs(hd.H - c->aux.H[n]), 10 * hd.error_proxy + Real("1e-50")) << n;
  }
  // n = 2 against the mpmath reference
  EXPECT_LT(abs(hankel_Hn(fam, 2).H - Real("-3.64783370868480226383137993675267139430192324")), Real("1e-40"));
}

TEST(RecurrenceFromAux, TZeroValues) {
  PrecisionScope scope(256);
  auto s = snap("1", "1", "0", 2);
  auto [a, b] = recurrence_from_aux(s.aux, 1);
  EXPECT_LT(abs(a - Real("0.5")), Real("1e-60"));
  EXPECT_LT(abs(b - Real(1) / 20), Real("1e-60"));
}

TEST(RecurrenceFromAux, MatchesFactorisation) {
  PrecisionScope scope(256);
  auto s = snap("1", "1", "1", 4);
  for (int n = 0; n <= 4; ++n) {
    auto [a, b] = recurrence_from_aux(s.aux, n);
    EXPECT_LT(abs(a / s.sys.alpha_rec[n] - 1), Real("1e-30")) << n;
    if (n >= 1) EXPECT_LT(abs(b / s.sys.beta_rec[n] - 1), Real("1e-30")) << n;
  }
}

TEST(KummerAnchors, AlphaZeroAndRZero) {
  PrecisionScope scope(256);
  auto s = snap("1.5", "0.5", "2", 1);
  const auto k = kummer_n0(s.params, s.ctx);
  EXPECT_LT(abs(k.alpha0 - s.sys.alpha_rec[0]), Real("1e-40"));
  EXPECT_LT(abs(k.R0 - s.aux.R[0]), Real("1e-40"));
}

}  // namespace
}  // namespace pjlab
