#include "pjlab/identities.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace pjlab {
namespace {

using boost::multiprecision::abs;

const IdentityCheck& check_named(const std::string& name) {
  for (const auto& c : identity_registry())
    if (c.name == name) return c;
  throw std::logic_error("no check " + name);
}

VerifyPlan small_plan(std::vector<std::string> t, int n_max, std::set<std::string> suites = {}) {
  VerifyPlan p;
  p.t_grid = std::move(t);
  p.n_max = n_max;
  p.suites = std::move(suites);
  p.options.classical_n = 40;
  return p;
}

std::vector<ResidualReport> failures(const std::vector<ResidualReport>& r) {
  std::vector<ResidualReport> out;
  std::copy_if(r.begin(), r.end(), std::back_inserter(out), [](const auto& x) { return x.status == Status::fail; });
  return out;
}

std::string describe(const std::vector<ResidualReport>& r) {
  std::string s;
  for (const auto& x : r)
    s += x.identity + " n=" + std::to_string(x.n) + " t=" + format_sci(x.t, 3) + " res=" + format_sci(x.residual, 3) +
         "\n";
  return s;
}

TEST(Registry, CoverageLockHolds) {
  EXPECT_NO_THROW(coverage_lock());
  auto [missing, extra] = coverage_gaps();
  EXPECT_TRUE(missing.empty());
  EXPECT_TRUE(extra.empty());
}

TEST(Registry, NamesUniqueAndClassified) {
  std::set<std::string> seen;
  for (const auto& c : identity_registry()) {
    EXPECT_TRUE(seen.insert(c.name).second) << c.name;
    EXPECT_NE(std::find(all_suites().begin(), all_suites().end(), c.suite), all_suites().end()) << c.name;
    EXPECT_TRUE(Tolerances::known(c.tol_class)) << c.name << " " << c.tol_class;
    EXPECT_TRUE(static_cast<bool>(c.run)) << c.name;
  }
}

TEST(SamplePoints, DeterministicAndInAnnulus) {
  PrecisionScope scope(128);
  auto a = sample_points(8, kLadderSeed);
  auto b = sample_points(8, kLadderSeed);
  ASSERT_EQ(a.size(), 8u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].re, b[i].re);
    EXPECT_EQ(a[i].im, b[i].im);
    const Real r = abs(a[i] - Complex(Real("0.5")));
    EXPECT_GE(r, Real("1.5") - Real("1e-30"));
    EXPECT_LE(r, Real(3) + Real("1e-30"));
  }
}

TEST(Tracked, CancellationIsMeasuredAgainstTermSize) {
  PrecisionScope scope(128);
  const TR d = TR(Real(1)) + TR(Real(2)) - TR(Real(3));
  EXPECT_EQ(d.v, 0);
  EXPECT_EQ(d.m, 6);
  EXPECT_EQ(normalized(d, residual_floor(128)), 0);
  const TR q = TR(Real(6)) / TR(Real(-3));
  EXPECT_EQ(q.v, -2);
  EXPECT_EQ(q.m, 4);  // (6 + 2*3)/3
  const TR e = TR(Real(1)) - TR(Real("0.999"));
  EXPECT_LT(abs(normalized(e, residual_floor(128)) - Real("0.001") / Real("1.999")), Real("1e-30"));
}

TEST(Tolerances, OverridesAndValidation) {
  Tolerances t;
  PrecisionScope scope(256);
  EXPECT_EQ(t.get("algebraic", 256), Real(1e-40));
  EXPECT_EQ(t.get("hankel", 256), pow10_real(-64));
  t.set("riccati", 1e-10);
  EXPECT_EQ(t.get("riccati", 256), Real(1e-10));
  t.set("all", 1e-200);
  EXPECT_EQ(t.get("algebraic", 256), Real(1e-200));
  EXPECT_THROW(t.set("nonsense", 1), ConfigError);
  EXPECT_THROW(t.set("algebraic", -1), ConfigError);
}

TEST(RunVerify, DefaultSuitesPassAtModestDegree) {
  auto reports = run_verify(small_plan({"1"}, 4));
  EXPECT_TRUE(failures(reports).empty()) << describe(failures(reports));
  std::set<std::string> names;
  for (const auto& r : reports) names.insert(r.identity);
  for (const char* must : {"toda_alpha", "sigma_form", "R_riccati", "painleve_v", "discrete_sigma_form",
                           "alpha0_kummer_ratio", "ladder_lowering", "toda_convergence"})
    EXPECT_TRUE(names.count(must)) << must;
  EXPECT_TRUE(std::is_sorted(reports.begin(), reports.end(), report_order));
}

TEST(RunVerify, SecondParameterPoint) {
  auto plan = small_plan({"2"}, 4, {"difference", "recurrence", "discrete", "sigma", "riccati"});
  plan.alpha = "1.5";
  plan.beta = "0.5";
  auto reports = run_verify(plan);
  EXPECT_TRUE(failures(reports).empty()) << describe(failures(reports));
}

TEST(RunVerify, TZeroSuiteOnlyEmitsClosedFormReports) {
  auto reports = run_verify(small_plan({"0"}, 5, {"t0"}));
  ASSERT_FALSE(reports.empty());
  for (const auto& r : reports) {
    EXPECT_EQ(r.suite, "t0");
    EXPECT_EQ(r.identity.rfind("t0_", 0), 0u) << r.identity;
    EXPECT_EQ(r.t, 0);
  }
  EXPECT_TRUE(failures(reports).empty()) << describe(failures(reports));
}

TEST(RunVerify, SigmaFormIsExactlyZeroAtDegreeZero) {
  auto reports = run_verify(small_plan({"1.5"}, 2, {"sigma"}));
  bool found = false;
  for (const auto& r : reports)
    if (r.identity == "sigma_form" && r.n == 0) {
      found = true;
      EXPECT_EQ(r.residual, 0);
    }
  EXPECT_TRUE(found);
}

TEST(RunVerify, TinyToleranceFailsEveryStencilCheck) {
  auto plan = small_plan({"1"}, 2, {"toda", "sigma", "riccati"});
  plan.options.tol.set("all", 1e-200);
  plan.measure_convergence = false;
  auto reports = run_verify(plan);
  int stencil = 0;
  for (const auto& r : reports) {
    if (r.tol_class == "stencil1" || r.tol_class == "stencil2" || r.tol_class == "riccati" ||
        r.tol_class == "two_ode" || r.tol_class == "toda") {
      if (r.residual == 0) continue;  // degree-zero reductions are exact
      ++stencil;
      EXPECT_EQ(r.status, Status::fail) << r.identity << " n=" << r.n;
    }
  }
  EXPECT_GT(stencil, 20);
}

TEST(RunVerify, RejectsBadPlans) {
  EXPECT_THROW(run_verify(small_plan({}, 3)), ConfigError);
  EXPECT_THROW(run_verify(small_plan({"1"}, 0)), ConfigError);
  EXPECT_THROW(run_verify(small_plan({"1"}, 2, {"nope"})), ConfigError);
}

// A perturbed auxiliary value must be caught by the difference relations.
TEST(Checks, DetectCorruptedAuxiliary) {
  const auto ctx = PrecisionCtx::with_bits(256);
  PrecisionScope scope(ctx.working_bits);
  Snapshot s = build_snapshot(make_params("1", "1", "1"), 4, ctx);
  s.aux.R[2] *= 1 + Real("1e-30");
  SuiteOptions opt;
  std::vector<ResidualReport> out;
  CheckContext c;
  c.params = s.params;
  c.ctx = ctx;
  c.opt = &opt;
  c.n_check = 3;
  c.snap = &s;
  c.out = &out;
  check_named("Rstar_minus_R").run(c);
  check_named("r_pair_sum").run(c);
  bool caught = false;
  for (const auto& r : out)
    if (r.n == 2 && r.status == Status::fail) caught = true;
  EXPECT_TRUE(caught);
}

TEST(Checks, DiscreteFormStaysFiniteNearTZero) {
  const auto ctx = PrecisionCtx::with_bits(256);
  PrecisionScope scope(ctx.working_bits);
  Snapshot s = build_snapshot(make_params("1", "1", "1e-20"), 4, ctx);
  SuiteOptions opt;
  std::vector<ResidualReport> out;
  CheckContext c;
  c.params = s.params;
  c.ctx = ctx;
  c.opt = &opt;
  c.n_check = 3;
  c.snap = &s;
  c.out = &out;
  check_named("discrete_sigma_form").run(c);
  ASSERT_EQ(out.size(), 3u);
  for (const auto& r : out) {
    EXPECT_TRUE(boost::multiprecision::isfinite(r.residual));
    EXPECT_EQ(r.status, Status::pass) << r.n << " " << format_sci(r.residual, 3);
  }
}

TEST(P3Limit, ResidualDecaysWithBeta) {
  auto plan = small_plan({"1"}, 1, {"p3"});
  auto reports = run_verify(plan);
  int limit = 0, decay = 0;
  for (const auto& r : reports) {
    if (r.identity == "p3_limit") ++limit;
    if (r.identity == "p3_limit_decay") ++decay;
    EXPECT_EQ(r.status, Status::pass) << r.identity << " " << format_sci(r.residual, 3) << " " << r.notes;
  }
  EXPECT_EQ(limit, 1);
  EXPECT_EQ(decay, 2);
}

}  // namespace
}  // namespace pjlab
