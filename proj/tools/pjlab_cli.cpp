// pjlab: moments, verify, sweep and p3limit subcommands.
//
// Exit codes: 0 pass, 1 identity failure, 2 configuration or I/O error,
// 3 numerical/precision failure.

#include "pjlab/pjlab.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

namespace {

using namespace pjlab;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw flag values; applied on top of the config file.
struct Flags {
  std::string config;
  std::optional<std::string> alpha, beta, t, nmax, bits, suites, out, format, classical_n;
  std::vector<std::string> tol, svg;
  std::optional<int> kmax;
};

void add_common_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "key = value config file; flags override it");
  sub->add_option("--alpha", f.alpha, "exponent of x");
  sub->add_option("--beta", f.beta, "exponent of 1-x (p3limit: increasing comma list)");
  sub->add_option("--t", f.t, "comma list of t values (p3limit: s values)");
  sub->add_option("--nmax", f.nmax, "largest degree");
  sub->add_option("--bits", f.bits, "working precision in bits (default from nmax)");
  sub->add_option("--tol", f.tol, "class=value tolerance override, repeatable");
  sub->add_option("--suites", f.suites, "comma list of identity suites");
  sub->add_option("--out", f.out, "output path, - for stdout");
  sub->add_option("--format", f.format, "csv or json");
  sub->add_option("--svg", f.svg, "plot a sweep quantity, repeatable");
  sub->add_option("--classical-n", f.classical_n, "degree of the t = 0 classical check");
}

RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) load_config_file(cfg, f.config);
  auto set = [&](const char* key, const std::optional<std::string>& v) {
    if (v) apply_setting(cfg, key, *v);
  };
  set("alpha", f.alpha);
  set("beta", f.beta);
  set("t", f.t);
  set("nmax", f.nmax);
  set("bits", f.bits);
  set("suites", f.suites);
  set("out", f.out);
  set("format", f.format);
  set("classical-n", f.classical_n);
  for (const auto& item : f.tol) apply_setting(cfg, "tol", item);
  if (!f.svg.empty()) {
    std::string joined;
    for (const auto& q : f.svg) joined += (joined.empty() ? "" : ",") + q;
    apply_setting(cfg, "svg", joined);
  }
  validate(cfg);
  return cfg;
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("write to stdout failed");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::string format_of(const RunConfig& cfg, const char* fallback) {
  return cfg.format.empty() ? fallback : cfg.format;
}

int cmd_moments(const RunConfig& cfg, std::optional<int> kmax) {
  const PrecisionCtx ctx = config_ctx(cfg);
  PrecisionScope scope(ctx.working_bits);
  const int k_max = kmax ? *kmax : 2 * cfg.n_max + 1;
  if (k_max < 0) throw ConfigError("kmax must be >= 0");
  const WeightParams base = make_params(cfg.alpha, single_beta(cfg), "0");
  std::vector<MomentTable> tables;
  for (const auto& ts : cfg.t_grid) {
    const WeightParams p = base.at_t(Real(ts));
    std::vector<MomentShift> shifts{kPlainShift, kInverseComplementShift};
    if (p.t != 0) shifts.push_back(kInverseXShift);
    try {
      for (auto& tab : moment_table(p, k_max, shifts, ctx, true)) tables.push_back(std::move(tab));
    } catch (const PrecisionError& e) {
      throw PrecisionError("moments at t = " + ts + ": " + e.what());
    }
  }
  const int digits = output_digits(ctx.working_bits);
  std::ostringstream os;
  if (format_of(cfg, "csv") == "csv") {
    write_moments_csv(os, tables, digits);
  } else {
    nlohmann::ordered_json doc;
    doc["schema"] = kSchemaVersion;
    doc["command"] = "moments";
    doc["config"] = config_json(cfg, ctx.working_bits);
    doc["config"]["kmax"] = k_max;
    doc["moments"] = moments_json(tables, digits);
    os << dump(doc);
  }
  write_output(cfg.out, os.str());
  return kExitPass;
}

int emit_reports(const RunConfig& cfg, const char* command, const std::vector<ResidualReport>& reports,
                 unsigned bits) {
  const int digits = output_digits(bits);
  std::ostringstream os;
  if (format_of(cfg, "json") == "csv")
    write_reports_csv(os, reports, digits);
  else
    os << dump(reports_document(command, config_json(cfg, bits), reports, digits));
  write_output(cfg.out, os.str());
  const ReportSummary s = summarize(reports);
  std::cerr << command << ": " << s.pass << " pass, " << s.fail << " fail, " << s.inconclusive << " inconclusive\n";
  return s.fail ? kExitFail : kExitPass;
}

int cmd_verify(const RunConfig& cfg) {
  const VerifyPlan plan = verify_plan(cfg);
  const auto reports = run_verify(plan);
  return emit_reports(cfg, "verify", reports, plan_ctx(plan).working_bits);
}

int cmd_p3limit(const RunConfig& cfg) {
  const VerifyPlan plan = p3_plan(cfg);
  const auto reports = run_verify(plan);
  return emit_reports(cfg, "p3limit", reports, plan_ctx(plan).working_bits);
}

/// Moment tables for every grid point, computed concurrently.  The caller
/// holds the working precision, so the workers never change it.
std::vector<std::vector<MomentTable>> parallel_tables(const std::vector<WeightParams>& points, int n_max,
                                                      const PrecisionCtx& ctx) {
  std::vector<std::vector<MomentTable>> out(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < points.size();) {
      try {
        out[i] = snapshot_tables(points[i], n_max, ctx, false);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(points.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

int cmd_sweep(const RunConfig& cfg) {
  if (!cfg.svg.empty()) {
    if (cfg.t_grid.size() < 2) throw ConfigError("plots need at least two t values");
    if (cfg.out == "-") throw ConfigError("--svg needs --out (plots go to <out>.<quantity>.svg)");
  }
  const PrecisionCtx ctx = config_ctx(cfg);
  PrecisionScope scope(ctx.working_bits);
  const WeightParams base = make_params(cfg.alpha, single_beta(cfg), "0");
  std::vector<WeightParams> points;
  for (const auto& ts : cfg.t_grid) points.push_back(base.at_t(Real(ts)));

  auto tables = parallel_tables(points, cfg.n_max, ctx);
  // Factorization raises the precision internally, which is process-wide,
  // so this stage stays on one thread.
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Snapshot s;
    try {
      s = assemble_snapshot(points[i], cfg.n_max, ctx, std::move(tables[i]));
    } catch (const PrecisionError& e) {
      throw PrecisionError("sweep at t = " + cfg.t_grid[i] + ": " + e.what());
    }
    for (auto& r : sweep_rows(s)) rows.push_back(std::move(r));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.n < b.n; });

  const int digits = output_digits(ctx.working_bits);
  std::ostringstream os;
  if (format_of(cfg, "csv") == "csv") {
    write_sweep_csv(os, rows, digits);
  } else {
    nlohmann::ordered_json doc;
    doc["schema"] = kSchemaVersion;
    doc["command"] = "sweep";
    doc["config"] = config_json(cfg, ctx.working_bits);
    doc["rows"] = sweep_json(rows, digits);
    os << dump(doc);
  }
  write_output(cfg.out, os.str());
  for (const auto& q : cfg.svg) {
    std::ostringstream svg;
    write_sweep_svg(svg, rows, q);
    write_output(cfg.out + "." + q + ".svg", svg.str());
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal polynomials for x^a (1-x)^b exp(-t/x) on [0,1]: moments, identity checks, sweeps"};
  app.require_subcommand(1, 1);
  Flags f;
  auto* moments = app.add_subcommand("moments", "moment tables mu_k(t) for the plain and shifted weights");
  auto* verify = app.add_subcommand("verify", "run identity suites and write residual reports");
  auto* sweep = app.add_subcommand("sweep", "tabulate recurrence coefficients and auxiliaries over a t grid");
  auto* p3 = app.add_subcommand("p3limit", "check the beta -> infinity limit at fixed s = beta t");
  for (auto* sub : {moments, verify, sweep, p3}) add_common_flags(sub, f);
  moments->add_option("--kmax", f.kmax, "largest moment index (default 2 nmax + 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const RunConfig cfg = resolve(f);
    if (moments->parsed()) return cmd_moments(cfg, f.kmax);
    if (verify->parsed()) return cmd_verify(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg);
    return cmd_p3limit(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PrecisionError& e) {
    std::cerr << "precision error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
