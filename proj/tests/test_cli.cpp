#include "pjlab/pjlab.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>

using namespace pjlab;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(PJLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quoted) {
        if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cells.back() += '"';
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          cells.back() += ch;
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        cells.emplace_back();
      } else {
        cells.back() += ch;
      }
    }
    rows.push_back(cells);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pjlab_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, DefaultVerifyPasses) {
  const auto r = run_cli("verify");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["schema"], "1");
  EXPECT_EQ(doc["command"], "verify");
  EXPECT_EQ(doc["summary"]["fail"], 0);
  EXPECT_GT(doc["summary"]["pass"].get<int>(), 0);
  EXPECT_EQ(doc["reports"].size(), doc["summary"]["pass"].get<std::size_t>() +
                                        doc["summary"]["inconclusive"].get<std::size_t>());
}

TEST_F(CliTest, TinyToleranceFailsEveryStencilCheck) {
  const auto r = run_cli("verify --tol all=1e-200");
  ASSERT_EQ(r.code, 1);
  const auto doc = nlohmann::json::parse(r.out);
  int stencil = 0;
  for (const auto& rep : doc["reports"]) {
    const std::string cls = rep["class"];
    if (cls != "stencil1" && cls != "stencil2" && cls != "toda") continue;
    ++stencil;
    PrecisionScope scope(256);
    // at n = 0 some of these hold as 0 = 0 exactly, which no tolerance fails
    if (Real(rep["residual"].get<std::string>()) == 0)
      EXPECT_EQ(rep["n"], 0) << rep["identity"];
    else
      EXPECT_EQ(rep["status"], "fail") << rep["identity"];
  }
  EXPECT_GT(stencil, 0);
}

TEST_F(CliTest, TZeroSuiteOnlyEmitsClosedForms) {
  const auto r = run_cli("verify --suites t0 --t 0 --nmax 6 --classical-n 30");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_GT(doc["reports"].size(), 0u);
  for (const auto& rep : doc["reports"]) {
    EXPECT_EQ(rep["suite"], "t0");
    PrecisionScope scope(256);
    EXPECT_EQ(Real(rep["t"].get<std::string>()), 0);
  }
}

TEST_F(CliTest, EmptyGridIsConfigError) {
  EXPECT_EQ(run_cli("verify --t \"\"").code, 2);
  EXPECT_EQ(run_cli("moments --t \"\"").code, 2);
  EXPECT_EQ(run_cli("sweep --t \"\"").code, 2);
}

TEST_F(CliTest, BadInputsAreConfigErrors) {
  EXPECT_EQ(run_cli("verify --suites nonsense").code, 2);
  EXPECT_EQ(run_cli("verify --tol bogus=1").code, 2);
  EXPECT_EQ(run_cli("verify --nmax 0").code, 2);
  EXPECT_EQ(run_cli("verify --bits 32").code, 2);
  EXPECT_EQ(run_cli("verify --t -1").code, 2);
  EXPECT_EQ(run_cli("verify --alpha abc").code, 2);
  EXPECT_EQ(run_cli("verify --no-such-flag").code, 2);
  EXPECT_EQ(run_cli("nosuchcommand").code, 2);
  EXPECT_EQ(run_cli("verify --format xml").code, 2);
  EXPECT_EQ(run_cli("verify --config /nonexistent/file.cfg").code, 2);
}

TEST_F(CliTest, UnwritableOutputIsReported) {
  EXPECT_EQ(run_cli("moments --t 0 --out /nonexistent/dir/m.csv").code, 2);
}

TEST_F(CliTest, MomentsAtTZeroStartWithOneSixth) {
  const auto r = run_cli("moments --alpha 1 --beta 1 --t 0 --kmax 4");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_GE(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "shift", "t", "mu", "bound", "route_agreement"}));
  EXPECT_EQ(rows[1][0], "0");
  EXPECT_EQ(rows[1][1], "(0,0)");
  PrecisionScope scope(256);
  EXPECT_LT(abs(Real(rows[1][3]) - Real(1) / 6), Real("1e-50"));
  int plain = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) plain += rows[i][1] == "(0,0)";
  EXPECT_EQ(plain, 5);
}

TEST_F(CliTest, MomentRouteAgreementWithinBounds) {
  const auto r = run_cli("moments --t 1 --kmax 8");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  PrecisionScope scope(256);
  int checked = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 6u);
    ASSERT_FALSE(rows[i][5].empty());
    EXPECT_LT(Real(rows[i][5]), Real(rows[i][4])) << "row " << i;
    ++checked;
  }
  EXPECT_EQ(checked, 27);  // three shifts, k = 0..8
}

TEST_F(CliTest, MomentsJsonCarriesSchema) {
  const auto r = run_cli("moments --t 0,1 --nmax 2 --format json");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["schema"], "1");
  EXPECT_EQ(doc["moments"].size(), 6u * 2 + 6u * 3);
}

TEST_F(CliTest, SweepColumnsAndTZeroAnchor) {
  const fs::path out = dir_ / "sweep.csv";
  const auto r = run_cli("sweep --alpha 1.5 --beta 0.5 --t 0,0.25,1 --nmax 5 --out " + out.string());
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(slurp(out));
  ASSERT_EQ(rows.size(), 1u + 6 * 3);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "t", "alpha_n", "beta_n", "R_n", "Rstar_n", "r_n", "rstar_n",
                                               "H_n", "S_n"}));
  PrecisionScope scope(256);
  const WeightParams p = make_params("1.5", "0.5", "0");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int n = std::stoi(rows[i][0]);
    const Real t(rows[i][1]);
    if (t == 0) EXPECT_LT(abs(Real(rows[i][2]) - t0_alpha(p, n)), Real("1e-50")) << "n = " << n;
    if (n == 0) EXPECT_EQ(Real(rows[i][8]), 0);
  }
}

TEST_F(CliTest, SvgXCoordinatesFollowTheGrid) {
  const fs::path out = dir_ / "sweep.csv";
  const auto r = run_cli("sweep --t 0,0.3,0.7,1.5,4 --nmax 3 --svg beta --svg S --out " + out.string());
  ASSERT_EQ(r.code, 0);
  for (const char* q : {"beta", "S"}) {
    const std::string svg = slurp(out.string() + "." + q + ".svg");
    ASSERT_FALSE(svg.empty()) << q;
    const std::regex poly("<polyline data-n=\"(\\d+)\"[^>]*points=\"([^\"]*)\"");
    int lines = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly); it != std::sregex_iterator(); ++it) {
      ++lines;
      std::istringstream pts((*it)[2].str());
      std::string pt;
      double prev = -1;
      int count = 0;
      while (pts >> pt) {
        const double x = std::stod(pt.substr(0, pt.find(',')));
        EXPECT_GT(x, prev);
        prev = x;
        ++count;
      }
      EXPECT_EQ(count, 5);
    }
    EXPECT_EQ(lines, 4);
  }
}

TEST_F(CliTest, SvgNeedsTwoPointsAndAFile) {
  EXPECT_EQ(run_cli("sweep --t 1 --nmax 2 --svg alpha --out " + (dir_ / "a.csv").string()).code, 2);
  EXPECT_EQ(run_cli("sweep --t 0,1 --nmax 2 --svg alpha").code, 2);
  EXPECT_EQ(run_cli("sweep --t 0,1 --nmax 2 --svg nonsense --out " + (dir_ / "a.csv").string()).code, 2);
}

TEST_F(CliTest, OutputIsByteDeterministic) {
  const auto a = run_cli("sweep --t 0,0.5,1,2,3 --nmax 6 --format json");
  const auto b = run_cli("sweep --t 0,0.5,1,2,3 --nmax 6 --format json");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(nlohmann::json::parse(a.out)["schema"], "1");
  const auto c = run_cli("verify --nmax 3 --t 1 --suites ladder,recurrence");
  const auto d = run_cli("verify --nmax 3 --t 1 --suites ladder,recurrence");
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(c.out, d.out);
}

TEST_F(CliTest, DigitsFollowTheWorkingPrecision) {
  const auto r = run_cli("moments --t 0 --kmax 0 --bits 200");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  const std::string mu = rows[1][3];
  // 60 significant digits: one before the point, 59 after
  EXPECT_EQ(mu.substr(0, mu.find('e')).size(), 61u);
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
  const fs::path cfg = dir_ / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# sample\nalpha = 2\nbeta = 3\nt = 0\nnmax = 2\nformat = json\nsuites = t0\n";
  }
  const auto r = run_cli("verify --config " + cfg.string() + " --beta 0.5 --classical-n 30");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["config"]["alpha"], "2");
  EXPECT_EQ(doc["config"]["beta"][0], "0.5");
  EXPECT_EQ(doc["config"]["nmax"], 2);
  for (const auto& rep : doc["reports"]) EXPECT_EQ(rep["suite"], "t0");

  const fs::path bad = dir_ / "bad.cfg";
  {
    std::ofstream f(bad);
    f << "colour = blue\n";
  }
  EXPECT_EQ(run_cli("verify --config " + bad.string()).code, 2);
}

TEST_F(CliTest, CsvReportsFormat) {
  const auto r = run_cli("verify --nmax 2 --t 0 --suites t0 --classical-n 30 --format csv");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_GT(rows.size(), 1u);
  EXPECT_EQ(rows[0].front(), "identity");
  EXPECT_EQ(rows[0].back(), "notes");
}

TEST_F(CliTest, P3LimitRuns) {
  const auto r = run_cli("p3limit --nmax 1 --t 1 --beta 1e3,1e4,1e5");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["command"], "p3limit");
  ASSERT_GT(doc["reports"].size(), 0u);
  for (const auto& rep : doc["reports"]) EXPECT_EQ(rep["suite"], "p3");
  EXPECT_EQ(run_cli("p3limit --beta 1e4,1e3").code, 2);
  EXPECT_EQ(run_cli("p3limit --beta 1e4").code, 2);
}
