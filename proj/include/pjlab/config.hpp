#pragma once

/// Run configuration shared by the CLI subcommands.
///
/// A config file holds `key = value` lines ('#' starts a comment).  Keys
/// match the long flag names: alpha, beta, t, nmax, bits, tol, suites,
/// out, format, svg, classical-n.  `tol` takes `class=value` items
/// separated by commas and may repeat; `tol.<class> = value` is accepted
/// too.  Command-line flags override file values.

#include "pjlab/identities.hpp"
#include "pjlab/io.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pjlab {

struct RunConfig {
  std::string alpha = "1";
  /// A single value, or the beta ladder for the PIII limit.
  std::vector<std::string> beta{"1"};
  std::vector<std::string> t_grid{"0.5", "1", "2"};
  int n_max = 10;
  unsigned bits = 0;  ///< 0: sized from n_max
  std::map<std::string, double> tolerances;
  std::vector<std::string> suites;
  std::string out = "-";
  std::string format;  ///< empty: the subcommand's default
  std::vector<std::string> svg;
  int classical_n = 200;
  /// Which keys were set explicitly (file or flag).
  std::set<std::string> explicit_keys;
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + v + "' is not a number");
  }
  if (used != v.size()) throw ConfigError(key + ": '" + v + "' is not a number");
  return x;
}

inline int parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + v + "' is not an integer");
  }
  if (used != v.size() || x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigError(key + ": '" + v + "' is not an integer");
  return static_cast<int>(x);
}

/// Checks that a decimal string parses as a real (at 64 bits).
inline void check_real(const std::string& key, const std::string& v) {
  PrecisionScope scope(64);
  try {
    Real x(v);
    if (!boost::multiprecision::isfinite(x)) throw ConfigError(key + ": '" + v + "' is not finite");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + v + "' is not a number");
  }
}

inline void add_tolerances(RunConfig& cfg, const std::string& items) {
  for (const auto& item : split_list(items)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("tol: expected class=value, got '" + item + "'");
    const std::string cls = trim(item.substr(0, eq));
    const double v = parse_double("tol " + cls, trim(item.substr(eq + 1)));
    if (cls != "all" && !Tolerances::known(cls)) throw ConfigError("unknown tolerance class '" + cls + "'");
    if (!(v > 0)) throw ConfigError("tolerance for '" + cls + "' must be positive");
    cfg.tolerances[cls] = v;
  }
}

/// Applies one key/value pair.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key.rfind("tol.", 0) == 0) {
    add_tolerances(cfg, key.substr(4) + "=" + v);
  } else if (key == "alpha") {
    check_real(key, v);
    cfg.alpha = v;
  } else if (key == "beta") {
    cfg.beta = split_list(v);
    for (const auto& b : cfg.beta) check_real(key, b);
  } else if (key == "t") {
    cfg.t_grid = split_list(v);
    for (const auto& t : cfg.t_grid) check_real(key, t);
  } else if (key == "nmax") {
    cfg.n_max = parse_int(key, v);
  } else if (key == "bits") {
    const int b = parse_int(key, v);
    if (b < 64) throw ConfigError("bits must be at least 64");
    cfg.bits = static_cast<unsigned>(b);
  } else if (key == "tol") {
    add_tolerances(cfg, v);
  } else if (key == "suites") {
    cfg.suites = split_list(v);
  } else if (key == "out") {
    cfg.out = v;
  } else if (key == "format") {
    if (v != "csv" && v != "json") throw ConfigError("format must be csv or json");
    cfg.format = v;
  } else if (key == "svg") {
    cfg.svg = split_list(v);
  } else if (key == "classical-n" || key == "classical_n") {
    cfg.classical_n = parse_int(key, v);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
  cfg.explicit_keys.insert(key.rfind("tol.", 0) == 0 ? "tol" : key);
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

inline void validate(const RunConfig& cfg) {
  if (cfg.t_grid.empty()) throw ConfigError("t grid is empty");
  if (cfg.n_max < 1) throw ConfigError("nmax must be >= 1");
  if (cfg.bits != 0 && cfg.bits < 64) throw ConfigError("bits must be at least 64");
  if (cfg.beta.empty()) throw ConfigError("beta is empty");
  {
    PrecisionScope scope(64);
    for (const auto& t : cfg.t_grid)
      if (Real(t) < 0) throw ConfigError("t values must be >= 0 (got " + t + ")");
    if (!(Real(cfg.alpha) > 0)) throw ConfigError("alpha must be positive");
    for (const auto& b : cfg.beta)
      if (!(Real(b) > 0)) throw ConfigError("beta must be positive");
  }
  for (const auto& s : cfg.suites)
    if (std::find(all_suites().begin(), all_suites().end(), s) == all_suites().end())
      throw ConfigError("unknown suite '" + s + "'");
  for (const auto& q : cfg.svg)
    if (std::find(sweep_quantities().begin(), sweep_quantities().end(), q) == sweep_quantities().end())
      throw ConfigError("unknown svg quantity '" + q + "'");
  if (cfg.classical_n < 1) throw ConfigError("classical-n must be >= 1");
}

inline PrecisionCtx config_ctx(const RunConfig& cfg) {
  return cfg.bits ? PrecisionCtx::with_bits(cfg.bits) : PrecisionCtx::for_degree(cfg.n_max + 1);
}

inline const std::string& single_beta(const RunConfig& cfg) {
  if (cfg.beta.size() != 1) throw ConfigError("beta must be a single value for this command");
  return cfg.beta.front();
}

inline VerifyPlan verify_plan(const RunConfig& cfg) {
  validate(cfg);
  VerifyPlan plan;
  plan.alpha = cfg.alpha;
  plan.beta = single_beta(cfg);
  plan.t_grid = cfg.t_grid;
  plan.n_max = cfg.n_max;
  plan.bits = cfg.bits;
  plan.suites.insert(cfg.suites.begin(), cfg.suites.end());
  plan.options.classical_n = cfg.classical_n;
  for (const auto& [cls, v] : cfg.tolerances) plan.options.tol.set(cls, v);
  return plan;
}

/// The PIII limit run: t values are the s values, nmax is the degree, and
/// beta (if given) is the increasing ladder of beta values.
inline VerifyPlan p3_plan(const RunConfig& cfg) {
  validate(cfg);
  VerifyPlan plan;
  plan.alpha = cfg.alpha;
  plan.beta = "1";
  plan.t_grid = {"1"};
  plan.n_max = cfg.n_max;
  plan.bits = cfg.bits;
  plan.suites = {"p3"};
  plan.options.p3_n = cfg.n_max;
  plan.options.p3_s = cfg.explicit_keys.count("t") ? cfg.t_grid : std::vector<std::string>{"1"};
  if (cfg.explicit_keys.count("beta")) {
    if (cfg.beta.size() < 2) throw ConfigError("p3limit needs at least two beta values");
    PrecisionScope scope(64);
    for (std::size_t i = 1; i < cfg.beta.size(); ++i)
      if (!(Real(cfg.beta[i]) > Real(cfg.beta[i - 1]))) throw ConfigError("p3limit beta values must increase");
    plan.options.p3_betas = cfg.beta;
  }
  {
    PrecisionScope scope(64);
    for (const auto& s : plan.options.p3_s)
      if (!(Real(s) > 0)) throw ConfigError("p3limit s values must be positive");
  }
  for (const auto& [cls, v] : cfg.tolerances) plan.options.tol.set(cls, v);
  return plan;
}

inline nlohmann::ordered_json config_json(const RunConfig& cfg, unsigned bits) {
  nlohmann::ordered_json j;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["t"] = cfg.t_grid;
  j["nmax"] = cfg.n_max;
  j["bits"] = bits;
  nlohmann::ordered_json tol = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.tolerances) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    tol[k] = os.str();
  }
  j["tolerances"] = tol;
  j["suites"] = cfg.suites;
  return j;
}

}  // namespace pjlab
