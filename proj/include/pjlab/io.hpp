#pragma once

/// Serialization of moment tables, residual reports and sweep rows.
///
/// Reals are written in scientific notation with a digit count fixed by
/// the working precision, round(0.3 * bits), so output is byte-identical
/// for a fixed configuration.  JSON documents carry "schema": "1".

#include "pjlab/pipeline.hpp"
#include "pjlab/residual.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace pjlab {

inline constexpr const char* kSchemaVersion = "1";

inline int output_digits(unsigned bits) { return static_cast<int>(std::lround(bits * 0.3)); }

inline std::string fmt_real(const Real& x, int digits) { return format_sci(x, digits); }

// ---------------------------------------------------------------------------
// Moment tables

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline void write_moments_csv(std::ostream& os, const std::vector<MomentTable>& tables, int digits) {
  os << "k,shift,t,mu,bound,route_agreement\n";
  for (const auto& tab : tables) {
    const std::string t = fmt_real(tab.params.t, digits);
    for (int k = 0; k <= tab.k_max(); ++k) {
      os << k << ',' << csv_quote(to_string(tab.shift)) << ',' << t << ',' << fmt_real(tab.mu[k], digits) << ','
         << fmt_real(tab.combined_bounds.empty() ? tab.bounds[k] : tab.combined_bounds[k], digits) << ','
         << (tab.route_agreement.empty() ? std::string() : fmt_real(tab.route_agreement[k], digits)) << '\n';
    }
  }
}

inline nlohmann::ordered_json moments_json(const std::vector<MomentTable>& tables, int digits) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& tab : tables)
    for (int k = 0; k <= tab.k_max(); ++k) {
      nlohmann::ordered_json r;
      r["k"] = k;
      r["shift"] = to_string(tab.shift);
      r["t"] = fmt_real(tab.params.t, digits);
      r["mu"] = fmt_real(tab.mu[k], digits);
      r["bound"] = fmt_real(tab.combined_bounds.empty() ? tab.bounds[k] : tab.combined_bounds[k], digits);
      r["route_agreement"] = tab.route_agreement.empty() ? nlohmann::ordered_json(nullptr)
                                                         : nlohmann::ordered_json(fmt_real(tab.route_agreement[k], digits));
      rows.push_back(std::move(r));
    }
  return rows;
}

// ---------------------------------------------------------------------------
// Residual reports

struct ReportSummary {
  int pass = 0, fail = 0, inconclusive = 0;
};

inline ReportSummary summarize(const std::vector<ResidualReport>& reports) {
  ReportSummary s;
  for (const auto& r : reports) {
    switch (r.status) {
      case Status::pass:
        ++s.pass;
        break;
      case Status::fail:
        ++s.fail;
        break;
      case Status::inconclusive:
        ++s.inconclusive;
        break;
    }
  }
  return s;
}

inline nlohmann::ordered_json report_json(const ResidualReport& r, int digits) {
  nlohmann::ordered_json j;
  j["identity"] = r.identity;
  j["suite"] = r.suite;
  j["class"] = r.tol_class;
  j["alpha"] = fmt_real(r.alpha, digits);
  j["beta"] = fmt_real(r.beta, digits);
  j["n"] = r.n;
  j["t"] = fmt_real(r.t, digits);
  if (r.z)
    j["z"] = {fmt_real(r.z->re, digits), fmt_real(r.z->im, digits)};
  else
    j["z"] = nullptr;
  j["residual"] = fmt_real(r.residual, digits);
  j["tolerance"] = fmt_real(r.tolerance, digits);
  j["status"] = to_string(r.status);
  j["notes"] = r.notes;
  return j;
}

inline nlohmann::ordered_json reports_document(const std::string& command, const nlohmann::ordered_json& config,
                                               const std::vector<ResidualReport>& reports, int digits) {
  nlohmann::ordered_json doc;
  doc["schema"] = kSchemaVersion;
  doc["command"] = command;
  doc["config"] = config;
  const ReportSummary s = summarize(reports);
  doc["summary"] = {{"pass", s.pass}, {"fail", s.fail}, {"inconclusive", s.inconclusive}};
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(report_json(r, digits));
  doc["reports"] = std::move(arr);
  return doc;
}

inline void write_reports_csv(std::ostream& os, const std::vector<ResidualReport>& reports, int digits) {
  os << "identity,suite,class,alpha,beta,n,t,z_re,z_im,residual,tolerance,status,notes\n";
  for (const auto& r : reports) {
    os << r.identity << ',' << r.suite << ',' << r.tol_class << ',' << fmt_real(r.alpha, digits) << ','
       << fmt_real(r.beta, digits) << ',' << r.n << ',' << fmt_real(r.t, digits) << ','
       << (r.z ? fmt_real(r.z->re, digits) : std::string()) << ','
       << (r.z ? fmt_real(r.z->im, digits) : std::string()) << ',' << fmt_real(r.residual, digits) << ','
       << fmt_real(r.tolerance, digits) << ',' << to_string(r.status) << ',' << csv_quote(r.notes) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Sweep rows

struct SweepRow {
  int n = 0;
  Real t, alpha, beta, R, Rstar, r, rstar, H, S;
};

inline std::vector<SweepRow> sweep_rows(const Snapshot& s) {
  std::vector<SweepRow> rows;
  for (int n = 0; n <= s.sys.n_max; ++n)
    rows.push_back({n, s.params.t, s.sys.alpha_rec[n], s.sys.beta_rec[n], s.aux.R[n], s.aux.Rstar[n], s.aux.r[n],
                    s.aux.rstar[n], s.aux.H[n], s.aux.S[n]});
  return rows;
}

inline const std::vector<std::string>& sweep_quantities() {
  static const std::vector<std::string> q{"alpha", "beta", "R", "Rstar", "r", "rstar", "H", "S"};
  return q;
}

inline const Real& sweep_value(const SweepRow& row, const std::string& q) {
  if (q == "alpha") return row.alpha;
  if (q == "beta") return row.beta;
  if (q == "R") return row.R;
  if (q == "Rstar") return row.Rstar;
  if (q == "r") return row.r;
  if (q == "rstar") return row.rstar;
  if (q == "H") return row.H;
  if (q == "S") return row.S;
  throw ConfigError("unknown sweep quantity '" + q + "'");
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, int digits) {
  os << "n,t,alpha_n,beta_n,R_n,Rstar_n,r_n,rstar_n,H_n,S_n\n";
  for (const auto& r : rows) {
    os << r.n << ',' << fmt_real(r.t, digits);
    for (const Real* v : {&r.alpha, &r.beta, &r.R, &r.Rstar, &r.r, &r.rstar, &r.H, &r.S}) os << ',' << fmt_real(*v, digits);
    os << '\n';
  }
}

inline nlohmann::ordered_json sweep_json(const std::vector<SweepRow>& rows, int digits) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["t"] = fmt_real(r.t, digits);
    j["alpha_n"] = fmt_real(r.alpha, digits);
    j["beta_n"] = fmt_real(r.beta, digits);
    j["R_n"] = fmt_real(r.R, digits);
    j["Rstar_n"] = fmt_real(r.Rstar, digits);
    j["r_n"] = fmt_real(r.r, digits);
    j["rstar_n"] = fmt_real(r.rstar, digits);
    j["H_n"] = fmt_real(r.H, digits);
    j["S_n"] = fmt_real(r.S, digits);
    arr.push_back(std::move(j));
  }
  return arr;
}

/// One polyline per n of `quantity` against t.  Rows must be in grid
/// order; x is an affine image of t, so an increasing grid gives
/// increasing x.
inline void write_sweep_svg(std::ostream& os, const std::vector<SweepRow>& rows, const std::string& quantity) {
  constexpr double W = 640, Hh = 400, pad = 40;
  std::map<int, std::vector<std::pair<double, double>>> lines;
  double tmin = INFINITY, tmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& r : rows) {
    const double t = r.t.convert_to<double>();
    const double y = sweep_value(r, quantity).convert_to<double>();
    lines[r.n].emplace_back(t, y);
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (!(tmax > tmin)) tmax = tmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  auto X = [&](double t) { return pad + (W - 2 * pad) * (t - tmin) / (tmax - tmin); };
  auto Y = [&](double y) { return Hh - pad - (Hh - 2 * pad) * (y - ymin) / (ymax - ymin); };
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::fixed << std::setprecision(6);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hh << "\" viewBox=\"0 0 " << W
    << ' ' << Hh << "\">\n";
  s << "<title>" << quantity << "_n(t)</title>\n";
  s << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\"" << Hh - 2 * pad
    << "\" fill=\"none\" stroke=\"#888\"/>\n";
  s << "<text x=\"" << pad << "\" y=\"" << pad / 2 << "\" font-size=\"12\">" << quantity << "_n(t), t in [" << tmin
    << ", " << tmax << "], range [" << ymin << ", " << ymax << "]</text>\n";
  int idx = 0;
  for (const auto& [n, pts] : lines) {
    const int hue = (idx++ * 47) % 360;
    s << "<polyline data-n=\"" << n << "\" fill=\"none\" stroke=\"hsl(" << hue << ",70%,40%)\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) s << (i ? " " : "") << X(pts[i].first) << ',' << Y(pts[i].second);
    s << "\"/>\n";
  }
  s << "</svg>\n";
  os << s.str();
}

}  // namespace pjlab
