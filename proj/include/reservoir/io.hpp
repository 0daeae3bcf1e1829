#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "reservoir/params.hpp"
#include "reservoir/simulate.hpp"

namespace reservoir {

inline constexpr const char* engine_version = "reservoir 1.0.0";

// FNV-1a over the raw file bytes; reports cite this so a reader can tell
// which configuration produced them.
inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace detail

// Flat key=value configuration. '#' starts a comment, blank lines are
// ignored, keys may appear once. The hash covers the exact bytes read.
struct RunConfig {
  std::map<std::string, std::string> values;
  std::uint64_t hash = fnv1a64("");
  std::string source = "<none>";

  static RunConfig from_text(const std::string& text, const std::string& label) {
    RunConfig cfg;
    cfg.source = label;
    cfg.hash = fnv1a64(text);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string s = detail::trim(line);
      if (s.empty() || s[0] == '#') continue;
      size_t eq = s.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument(label + ": line " + std::to_string(lineno) +
                                    " is not key=value");
      std::string key = detail::trim(s.substr(0, eq));
      std::string val = detail::trim(s.substr(eq + 1));
      if (key.empty())
        throw std::invalid_argument(label + ": line " + std::to_string(lineno) +
                                    " has an empty key");
      if (!cfg.values.emplace(key, val).second)
        throw std::invalid_argument(label + ": duplicate key '" + key + "'");
    }
    return cfg;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str(), path);
  }

  bool has(const std::string& key) const { return values.count(key) != 0; }

  std::string text(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }

  double number(const std::string& key, double fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    size_t used = 0;
    double out = 0.0;
    try {
      out = std::stod(it->second, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != it->second.size() || it->second.empty())
      throw std::invalid_argument(source + ": key '" + key + "' is not a number: '" +
                                  it->second + "'");
    return out;
  }

  long integer(const std::string& key, long fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    size_t used = 0;
    long out = 0;
    try {
      out = std::stol(it->second, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != it->second.size() || it->second.empty())
      throw std::invalid_argument(source + ": key '" + key + "' is not an integer: '" +
                                  it->second + "'");
    return out;
  }

  // Reject any key outside the documented set, naming the first offender.
  void reject_unknown(const std::set<std::string>& known) const {
    for (const auto& kv : values)
      if (!known.count(kv.first))
        throw std::invalid_argument(source + ": unknown key '" + kv.first + "'");
  }
};

// Every configuration key the tool understands, in one namespace shared by
// all subcommands so a typo fails no matter where it appears.
inline const std::set<std::string>& known_config_keys() {
  static const std::set<std::string> keys = {
      // deep parameters
      "beta", "beta_G", "delta_k", "sigma", "j_h", "j_f", "kappa", "T_g", "T_q",
      "theta_bar", "mu_bar", "xi_bar", "R_bar", "phi_h", "psi_h", "phi_f", "psi_f",
      "rho_R", "rho_Y", "W_G", "gamma_d", "L_bar", "n_bar", "eta",
      // shock processes
      "shock_rho_R", "shock_rho_mu", "shock_rho_theta", "shock_rho_xi",
      "shock_sigma_R", "shock_sigma_mu", "shock_sigma_theta", "shock_sigma_xi",
      // simulation and solver
      "seed", "periods", "discard", "solver_tol",
      // reduced-form stage
      "var_max_lag", "irf_horizon", "irf_mode", "fevd_horizon", "lp_horizon",
      // posterior sampling
      "chain_length", "burn_in", "proposal_scale",
      // growth extension
      "growth_n_g", "growth_sigma_n", "growth_horizon", "growth_periods",
      "growth_feedback", "growth_target_alpha",
      // cycle comparison inputs
      "cycles_a", "cycles_b",
  };
  return keys;
}

inline ModelParams params_from_config(const RunConfig& c) {
  ModelParams p;
  p.beta = c.number("beta", p.beta);
  p.beta_G = c.number("beta_G", p.beta_G);
  p.delta_k = c.number("delta_k", p.delta_k);
  p.sigma = c.number("sigma", p.sigma);
  p.j_h = c.number("j_h", p.j_h);
  p.j_f = c.number("j_f", p.j_f);
  p.kappa = c.number("kappa", p.kappa);
  p.T_g = c.number("T_g", p.T_g);
  p.T_q = c.number("T_q", p.T_q);
  p.theta_bar = c.number("theta_bar", p.theta_bar);
  p.mu_bar = c.number("mu_bar", p.mu_bar);
  p.xi_bar = c.number("xi_bar", p.xi_bar);
  p.R_bar = c.number("R_bar", p.R_bar);
  p.phi_h = c.number("phi_h", p.phi_h);
  p.psi_h = c.number("psi_h", p.psi_h);
  p.phi_f = c.number("phi_f", p.phi_f);
  p.psi_f = c.number("psi_f", p.psi_f);
  p.rho_R = c.number("rho_R", p.rho_R);
  p.rho_Y = c.number("rho_Y", p.rho_Y);
  p.W_G = c.number("W_G", p.W_G);
  p.gamma_d = c.number("gamma_d", p.gamma_d);
  p.L_bar = c.number("L_bar", p.L_bar);
  p.n_bar = c.number("n_bar", p.n_bar);
  p.eta = c.number("eta", p.eta);
  p.validate();
  return p;
}

inline ShockSpec shocks_from_config(const RunConfig& c) {
  ShockSpec spec;
  for (int j = 0; j < 4; ++j) {
    spec.rho[j] = c.number("shock_rho_" + shock_names[j], spec.rho[j]);
    spec.sigma[j] = c.number("shock_sigma_" + shock_names[j], spec.sigma[j]);
  }
  spec.validate();
  return spec;
}

// Shortest-unambiguous decimal rendering; CSV bodies must not depend on
// locale or stream state, so everything funnels through here.
inline std::string fmt_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// CSV with '#' provenance comments ahead of the header. No timestamps
// anywhere: the same configuration and seed must rebuild the same bytes.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string body() const {
    std::ostringstream out;
    for (size_t j = 0; j < header.size(); ++j) {
      if (j) out << ',';
      out << header[j];
    }
    out << '\n';
    for (const auto& row : rows) {
      for (size_t j = 0; j < row.size(); ++j) {
        if (j) out << ',';
        out << row[j];
      }
      out << '\n';
    }
    return out.str();
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (const auto& c : comments) out << "# " << c << '\n';
    out << body();
    if (!out) throw std::runtime_error("write failed on '" + path + "'");
  }
};

inline std::vector<std::string> provenance(const RunConfig& cfg, std::uint64_t seed,
                                           const std::string& command) {
  return {engine_version, "command " + command, "config " + hash_hex(cfg.hash),
          "seed " + std::to_string(seed)};
}

// A "date,value" series. Dates must be ISO-8601 calendar dates; violations
// are reported with one-based row and column coordinates.
struct DatedSeries {
  std::vector<std::string> dates;
  std::vector<double> values;
};

namespace detail {

inline bool iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  int month = (s[5] - '0') * 10 + (s[6] - '0');
  int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

}  // namespace detail

inline DatedSeries load_dated_series(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cycles: cannot open '" + path + "'");
  DatedSeries out;
  std::string line;
  int row = 0;
  auto fail = [&](int col, const std::string& what) {
    throw std::invalid_argument(path + ": row " + std::to_string(row) + ", column " +
                                std::to_string(col) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string s = detail::trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t comma = s.find(',');
    if (comma == std::string::npos) fail(1, "expected two comma-separated fields");
    std::string date = detail::trim(s.substr(0, comma));
    std::string val = detail::trim(s.substr(comma + 1));
    if (row == 1 && !detail::iso_date(date)) continue;  // header row
    if (!detail::iso_date(date)) fail(1, "date is not ISO-8601 (YYYY-MM-DD): '" + date + "'");
    if (val.find(',') != std::string::npos) fail(3, "unexpected extra field");
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != val.size() || val.empty()) fail(2, "not a number: '" + val + "'");
    out.dates.push_back(date);
    out.values.push_back(v);
  }
  if (out.values.empty()) throw std::invalid_argument(path + ": no data rows");
  return out;
}

}  // namespace reservoir
