#include "pjlab/differentiate.hpp"

#include <gtest/gtest.h>

namespace pjlab {
namespace {

using boost::multiprecision::abs;
using boost::multiprecision::exp;

TEST(FdDerivative, SquareFirstDerivative) {
  const auto ctx = PrecisionCtx::with_bits(256);
  PrecisionScope scope(ctx.working_bits);
  auto e = fd_derivative([](const Real& t) { return Real(t * t); }, Real(1), 1, ctx);
  EXPECT_LE(abs(e.value - 2), e.error_proxy + ctx.epsilon() * 64 / ctx.fd_step_scale());
  EXPECT_LT(abs(e.value - 2), Real("1e-50"));
}

TEST(FdDerivative, CubeSecondDerivative) {
  const auto ctx = PrecisionCtx::with_bits(256);
  PrecisionScope scope(ctx.working_bits);
  auto e = fd_derivative([](const Real& t) { return Real(t * t * t); }, Real(2), 2, ctx);
  EXPECT_LT(abs(e.value - 12), Real("1e-30"));
}

TEST(FdDerivative, QuarticIsExactForFivePointStencil) {
  const auto ctx = PrecisionCtx::with_bits(192);
  PrecisionScope scope(ctx.working_bits);
  auto g = [](const Real& t) { return Real(3 * t * t * t * t - t * t * t + 2 * t - 5); };
  const Real t = Real("0.7");
  auto d1 = fd_derivative(g, t, 1, ctx);
  const Real exact1 = 12 * t * t * t - 3 * t * t + 2;
  EXPECT_LT(abs(d1.value - exact1), Real("1e-40"));
}

// The error of the 5-point first derivative falls like h^4: quartering the
// relative step twice shrinks it by about 4^4 each time.
TEST(FdDerivative, ExponentialConvergesAtFourthOrder) {
  auto ctx = PrecisionCtx::with_bits(256);
  PrecisionScope scope(ctx.working_bits);
  const Real e1 = exp(Real(1));
  std::vector<Real> errs;
  for (double lg : {-6.0, -8.0, -10.0}) {
    ctx.fd_step_scale_log2 = lg;
    auto d = fd_derivative([](const Real& t) { return exp(t); }, Real(1), 1, ctx);
    errs.push_back(abs(d.value - e1));
  }
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    const double order = boost::multiprecision::log(errs[i] / errs[i + 1]).convert_to<double>() / std::log(4.0);
    EXPECT_NEAR(order, 4.0, 0.1);
  }
}

TEST(FdDerivative, ErrorProxyTracksTheTrueError) {
  auto ctx = PrecisionCtx::with_bits(256);
  ctx.fd_step_scale_log2 = -8;
  PrecisionScope scope(ctx.working_bits);
  auto d = fd_derivative([](const Real& t) { return exp(t); }, Real(1), 1, ctx);
  EXPECT_LT(abs(d.value - exp(Real(1))), d.error_proxy);
}

TEST(FdDerivative, StencilMustStayPositive) {
  const auto ctx = PrecisionCtx::with_bits(128);
  PrecisionScope scope(ctx.working_bits);
  EXPECT_THROW(Stencil::around(Real(0), ctx), DomainError);
  auto wide = ctx;
  wide.fd_step_scale_log2 = -0.5;
  EXPECT_THROW(Stencil::around(Real(1), wide), DomainError);
}

TEST(FdDerivative, RejectsThirdOrder) {
  const auto ctx = PrecisionCtx::with_bits(128);
  PrecisionScope scope(ctx.working_bits);
  EXPECT_THROW(fd_derivative([](const Real& t) { return t; }, Real(1), 3, ctx), DomainError);
}

TEST(FdDerivative, DeterministicAcrossCalls) {
  const auto ctx = PrecisionCtx::with_bits(192);
  PrecisionScope scope(ctx.working_bits);
  auto g = [](const Real& t) { return exp(-t) * t; };
  auto a = fd_derivative(g, Real("1.3"), 2, ctx);
  auto b = fd_derivative(g, Real("1.3"), 2, ctx);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error_proxy, b.error_proxy);
}

}  // namespace
}  // namespace pjlab
