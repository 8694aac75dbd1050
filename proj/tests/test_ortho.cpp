#include "pjlab/closed_forms.hpp"
#include "pjlab/ortho.hpp"

#include <gtest/gtest.h>

namespace pjlab {
namespace {

using boost::multiprecision::abs;

struct Built {
  MomentTable mu;
  OrthoSystem sys;
};

Built build(const char* a, const char* b, const char* t, int n_max, unsigned bits = 256) {
  const auto ctx = PrecisionCtx::with_bits(bits);
  PrecisionScope scope(bits);
  const auto p = make_params(a, b, t);
  const std::vector<MomentShift> shifts{{0, 0}};
  Built out;
  out.mu = moment_table(p, 2 * n_max + 1, shifts, ctx)[0];
  out.sys = build_ortho(out.mu, n_max, ctx);
  return out;
}

TEST(BuildOrtho, TZeroFirstCoefficients) {
  PrecisionScope scope(256);
  auto b = build("1", "1", "0", 3);
  EXPECT_LT(abs(b.sys.alpha_rec[1] - Real("0.5")), Real("1e-60"));
  EXPECT_LT(abs(b.sys.beta_rec[1] - Real(1) / 20), Real("1e-60"));
}

TEST(BuildOrtho, DegreeZeroRelations) {
  PrecisionScope scope(256);
  auto b = build("1.5", "0.5", "2", 3);
  EXPECT_EQ(b.sys.p1[0], 0);
  EXPECT_LT(abs(b.sys.alpha_rec[0] + b.sys.p1[1]), Real("1e-60"));
  EXPECT_LT(abs(b.sys.alpha_rec[0] - b.mu[1] / b.mu[0]), Real("1e-60"));
}

// Reference values from an independent mpmath Gram-Schmidt (80 digits).
TEST(BuildOrtho, PinnedRecurrenceAtTOne) {
  PrecisionScope scope(256);
  auto b = build("1", "1", "1", 3);
  EXPECT_LT(abs(b.sys.alpha_rec[1] - Real("0.614097264166826266448043670299992678687178927")), Real("1e-44"));
  EXPECT_LT(abs(b.sys.beta_rec[2] - Real("0.0369214964237063399796919363663172673066493071")), Real("1e-44"));
  EXPECT_LT(abs(b.sys.p1[3] - Real("-1.86549255472141033015856488499437065719531952")), Real("1e-44"));
}

TEST(BuildOrtho, MatchesClosedFormsAtTZero) {
  PrecisionScope scope(256);
  auto b = build("1.5", "0.5", "0", 8);
  const auto& p = b.sys.params;
  for (int n = 0; n <= 8; ++n) {
    EXPECT_LT(abs(b.sys.alpha_rec[n] / t0_alpha(p, n) - 1), Real("1e-50")) << n;
    if (n >= 1) EXPECT_LT(abs(b.sys.beta_rec[n] / t0_beta(p, n) - 1), Real("1e-50")) << n;
  }
}

TEST(BuildOrtho, SupportBounds) {
  PrecisionScope scope(320);
  auto b = build("1", "1", "2", 10, 320);
  for (int n = 0; n <= 10; ++n) {
    EXPECT_GT(b.sys.alpha_rec[n], 0);
    EXPECT_LT(b.sys.alpha_rec[n], 1);
    if (n >= 1) {
      EXPECT_GT(b.sys.beta_rec[n], 0);
      EXPECT_LE(b.sys.beta_rec[n], Real("0.25"));
    }
  }
}

TEST(BuildOrtho, LowPrecisionLosesDefiniteness) {
  // 64 bits cannot carry a degree-30 Hankel factorisation.
  const auto ctx = PrecisionCtx::with_bits(64);
  PrecisionScope scope(ctx.working_bits);
  const auto p = make_params("1", "1", "0");
  MomentTable mu;
  mu.params = p;
  mu.mu = beta_moments(p, {}, 61, ctx);
  EXPECT_THROW(build_ortho(mu, 30, ctx), PrecisionError);
}

TEST(HankelOracle, SmallCases) {
  PrecisionScope scope(256);
  auto b = build("1", "1", "0", 2);
  const auto ctx = PrecisionCtx::with_bits(256);
  EXPECT_EQ(hankel_det_oracle(b.mu, 0, ctx), 1);
  EXPECT_EQ(hankel_det_oracle(b.mu, 1, ctx), b.mu[0]);
  EXPECT_LT(abs(hankel_det_oracle(b.mu, 2, ctx) - Real(1) / 720), Real("1e-70"));
}

TEST(HankelOracle, AgreesWithProductOfNorms) {
  const auto ctx = PrecisionCtx::for_degree(12);
  PrecisionScope scope(ctx.working_bits);
  auto b = build("1.5", "0.5", "1", 12, ctx.working_bits);
  const Real tol = pow10_real(-static_cast<int>(ctx.working_bits / 4));
  for (int n = 0; n <= 13; ++n) {
    const Real o = hankel_det_oracle(b.mu, n, ctx);
    EXPECT_LT(abs(o - b.sys.D[n]) / o, tol) << n;
  }
}

TEST(PolyEval, DegreeOneVanishesAtAlphaZero) {
  PrecisionScope scope(256);
  auto b = build("1", "1", "1", 2);
  EXPECT_LT(abs(poly_eval(b.sys, 1, Complex(b.sys.alpha_rec[0])).value), Real("1e-70"));
}

TEST(PolyEval, MonicAtLargeArgument) {
  PrecisionScope scope(256);
  auto b = build("1", "1", "1", 5);
  const Complex z(Real("1e6"));
  for (int n = 1; n <= 6; ++n) {
    const Complex v = poly_eval(b.sys, n, z).value;
    const Real ratio = v.re / boost::multiprecision::pow(z.re, n);
    EXPECT_LT(abs(ratio - 1), Real("1e-5")) << n;
  }
}

TEST(PolyEval, RecurrenceAndCoefficientsAgree) {
  PrecisionScope scope(256);
  auto b = build("1.5", "0.5", "2", 6);
  const Complex z(Real("0.3"), Real("1.2"));
  for (int n = 0; n <= 7; ++n) {
    const Complex a = poly_eval(b.sys, n, z).value;
    const Complex c = poly_eval_coeffs(b.sys, n, z);
    EXPECT_LT(abs(a - c), Real("1e-60")) << n;
  }
}

TEST(PolyEval, DerivativeMatchesCoefficients) {
  PrecisionScope scope(256);
  auto b = build("1", "1", "1", 4);
  const Real x("0.37");
  for (int n = 1; n <= 5; ++n) {
    Real d = 0;
    const auto& c = b.sys.coeffs[n];
    for (int j = n; j >= 1; --j) d = d * x + j * c[j];
    EXPECT_LT(abs(poly_eval(b.sys, n, Complex(x)).derivative.re - d), Real("1e-60")) << n;
  }
}

TEST(Orthogonality, DirectQuadratureOfP2P1) {
  const auto ctx = PrecisionCtx::with_bits(256);
  PrecisionScope scope(ctx.working_bits);
  auto b = build("1", "1", "1", 2);
  const auto& p = b.sys.params;
  auto r = de_quad(
      [&](const Real& x, const Real& xc) {
        return Real(poly_eval(b.sys, 2, Complex(x)).value.re * poly_eval(b.sys, 1, Complex(x)).value.re *
                    weight_with_complement(p, x, xc));
      },
      Interval::unit, ctx);
  EXPECT_LT(abs(r.value), r.error_bound + Real("1e-70"));
}

}  // namespace
}  // namespace pjlab
