/*
 *            Copyright 2026 The qed1d Development Team
 *
 *      Licensed under the Apache License, Version 2.0 (the "License")
 *
 * You may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *              http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once
#ifndef QED1D_TOOLS_CLI_HPP
#define QED1D_TOOLS_CLI_HPP

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <qed1d/qed1d.hpp>

namespace qed1d::cli {

inline constexpr const char* version = "1.0.0";

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string fmt(double v) {
  char buf[40];
  if (v == 0.0) v = 0.0;  // no "-0" in output
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Resolved run configuration; built from the config file and the command
/// line, validated before anything is computed.
struct RunConfig {
  std::string command;
  double m = 1.0;
  double c = 1.0;
  double Z = 1.0;
  std::vector<double> L;
  std::vector<double> Lambda;
  std::vector<double> inv_c;
  std::vector<double> r;
  std::vector<double> eps;
  int grid_points = 400;
  double x_max = 3.0;
  double k_max = 100.0;
  bool momentum = false;
  bool c_given = false;
  std::string source = "exact";
  std::string vp = "exact";
  std::string which;
  std::string out;
  QuadSpec quad;
  int threads = 1;
};

using RawValues = std::map<std::string, std::vector<std::string>>;

struct KeyInfo {
  const char* name;
  bool flag;
  bool repeatable;
  const char* help;
};

inline const std::vector<KeyInfo>& known_keys() {
  static const std::vector<KeyInfo> keys = {
      {"m", false, false, "mass (default 1)"},
      {"c", false, false, "speed of light (default 1)"},
      {"Z", false, false, "nuclear charge (default 1)"},
      {"L", false, true, "box length, repeatable for scans"},
      {"Lambda", false, true, "momentum cutoff, repeatable for scans"},
      {"inv-c", false, true, "1/c values for exact lamb-shift scans, repeatable"},
      {"r", false, true, "cutoff ratios for appendix b, repeatable"},
      {"eps", false, true, "averaging widths for appendix c, repeatable"},
      {"grid-points", false, false, "number of grid points (default 400)"},
      {"x-max", false, false, "half width of the position grid (default 3)"},
      {"k-max", false, false, "half width of the exact momentum grid (default 100)"},
      {"momentum", true, false, "emit momentum-space densities"},
      {"source", false, false, "electron source: exact | basis-raw | basis-improved"},
      {"vp", false, false, "vacuum polarization: raw | regularized | exact | uehling"},
      {"which", false, false, "density: uehling_exact | total_exact | basis | basis_regularized; appendix: a | b | c | d"},
      {"out", false, false, "output path (default stdout)"},
      {"abs-tol", false, false, "quadrature absolute tolerance"},
      {"rel-tol", false, false, "quadrature relative tolerance"},
      {"max-refinements", false, false, "quadrature bisection depth"},
  };
  return keys;
}

inline std::string normalize_key(std::string k) {
  std::replace(k.begin(), k.end(), '_', '-');
  for (const auto& info : known_keys()) {
    if (k == info.name) return k;
    // case-insensitive match for the few mixed-case keys
    std::string a = k, b = info.name;
    std::transform(a.begin(), a.end(), a.begin(), [](unsigned char ch) { return std::tolower(ch); });
    std::transform(b.begin(), b.end(), b.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (a == b && a != "l" && a != "z") return info.name;
  }
  if (k == "lambda") return "Lambda";
  throw ConfigError("unknown configuration key '" + k + "'");
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::string s = trim(v);
  if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Flat key=value text ('#' comments) or a single JSON object.
inline RawValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  RawValues out;
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(t);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("JSON config must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::vector<std::string> vals;
      auto scalar = [](const nlohmann::json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw ConfigError("unsupported JSON value in config");
      };
      if (it.value().is_array()) {
        for (const auto& v : it.value()) vals.push_back(scalar(v));
      } else {
        vals.push_back(scalar(it.value()));
      }
      out[normalize_key(it.key())] = vals;
    }
    return out;
  }
  std::stringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    auto vals = split_list(line.substr(eq + 1));
    auto& slot = out[key];
    slot.insert(slot.end(), vals.begin(), vals.end());
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("--" + key + ": '" + s + "' is not a number");
  }
  if (pos != s.size() || !std::isfinite(v)) throw ConfigError("--" + key + ": '" + s + "' is not a finite number");
  return v;
}

inline int to_int(const std::string& key, const std::string& s) {
  const double v = to_double(key, s);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("--" + key + ": '" + s + "' is not an integer");
  return static_cast<int>(v);
}

inline bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("--" + key + ": '" + s + "' is not a boolean");
}

inline int env_threads() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("QED1D_THREADS");
  if (!env) return static_cast<int>(hw);
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) throw ConfigError("QED1D_THREADS must be a positive integer");
  return static_cast<int>(v);
}

inline RunConfig resolve(const std::string& command, const RawValues& values) {
  RunConfig cfg;
  cfg.command = command;
  auto single = [&](const std::string& key) -> const std::string* {
    auto it = values.find(key);
    if (it == values.end() || it->second.empty()) return nullptr;
    if (it->second.size() > 1) throw ConfigError("--" + key + " given more than once");
    return &it->second.front();
  };
  auto list = [&](const std::string& key, std::vector<double>& dst) {
    auto it = values.find(key);
    if (it == values.end()) return;
    dst.clear();
    for (const auto& s : it->second) dst.push_back(to_double(key, s));
  };
  if (auto v = single("m")) cfg.m = to_double("m", *v);
  if (auto v = single("c")) {
    cfg.c = to_double("c", *v);
    cfg.c_given = true;
  }
  if (auto v = single("Z")) cfg.Z = to_double("Z", *v);
  list("L", cfg.L);
  list("Lambda", cfg.Lambda);
  list("inv-c", cfg.inv_c);
  list("r", cfg.r);
  list("eps", cfg.eps);
  if (auto v = single("grid-points")) cfg.grid_points = to_int("grid-points", *v);
  if (auto v = single("x-max")) cfg.x_max = to_double("x-max", *v);
  if (auto v = single("k-max")) cfg.k_max = to_double("k-max", *v);
  if (auto v = single("momentum")) cfg.momentum = to_bool("momentum", *v);
  if (auto v = single("source")) cfg.source = *v;
  if (auto v = single("vp")) cfg.vp = *v;
  if (auto v = single("which")) cfg.which = *v;
  if (auto v = single("out")) cfg.out = *v;
  if (auto v = single("abs-tol")) cfg.quad.abs_tol = to_double("abs-tol", *v);
  if (auto v = single("rel-tol")) cfg.quad.rel_tol = to_double("rel-tol", *v);
  if (auto v = single("max-refinements")) cfg.quad.max_refinements = to_int("max-refinements", *v);
  cfg.threads = env_threads();

  // defaults that depend on the command
  if (command == "bound-state") {
    if (cfg.L.empty()) cfg.L = {4, 6, 8, 10, 12, 14};
    if (cfg.Lambda.empty()) cfg.Lambda = {10, 20, 30, 40, 50, 75, 100};
  } else {
    if (cfg.L.empty()) cfg.L = {10};
    if (cfg.Lambda.empty()) cfg.Lambda = {50};
  }
  if (command == "appendix" && cfg.which == "b" && cfg.r.empty()) cfg.r = {0.5, 1.0, 2.0, std::exp(1.0)};
  if (command == "appendix" && cfg.which == "c" && cfg.eps.empty()) cfg.eps = {1e-1, 1e-2, 1e-3};
  if (command == "lamb-shift" && cfg.inv_c.empty()) {
    if (cfg.c_given) {
      cfg.inv_c = {1.0 / cfg.c};
    } else {
      for (int i = 1; i <= 10; ++i) cfg.inv_c.push_back(0.1 * i);
    }
  }
  std::sort(cfg.L.begin(), cfg.L.end());
  std::sort(cfg.Lambda.begin(), cfg.Lambda.end());
  return cfg;
}

inline bool exact_pairing(const RunConfig& cfg) {
  return cfg.source == "exact" && (cfg.vp == "exact" || cfg.vp == "uehling");
}

inline void validate(const RunConfig& cfg) {
  if (!(cfg.m > 0)) throw ConfigError("m must be > 0");
  if (!(cfg.c > 0)) throw ConfigError("c must be > 0");
  if (!(cfg.Z >= 0)) throw ConfigError("Z must be >= 0");
  try {
    cfg.quad.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  for (double v : cfg.L) {
    if (!(v > 0)) throw ConfigError("L must be > 0");
  }
  for (double v : cfg.Lambda) {
    if (!(v > 0)) throw ConfigError("Lambda must be > 0");
  }
  auto check_basis = [&]() {
    for (double L : cfg.L) {
      for (double Lam : cfg.Lambda) {
        if (L * Lam / (2.0 * pi) < 1.0) throw ConfigError("L Lambda / 2 pi must be >= 1");
      }
    }
  };
  auto subcritical = [&]() {
    if (!(cfg.Z < 2.0 * cfg.c)) throw ConfigError("this command requires Z < 2c");
  };
  auto position_grid = [&]() {
    if (cfg.grid_points < 2 || cfg.grid_points % 2 != 0) throw ConfigError("grid-points must be even and >= 2");
    if (!(cfg.x_max > 0)) throw ConfigError("x-max must be > 0");
  };
  const std::string& cmd = cfg.command;
  if (cmd == "bound-state") {
    if (!(cfg.Z > 0)) throw ConfigError("bound-state requires Z > 0");
    subcritical();
    check_basis();
  } else if (cmd == "density") {
    static const std::vector<std::string> ok = {"uehling_exact", "total_exact", "basis", "basis_regularized"};
    if (std::find(ok.begin(), ok.end(), cfg.which) == ok.end()) {
      throw ConfigError("density needs --which uehling_exact|total_exact|basis|basis_regularized");
    }
    if (cfg.which != "uehling_exact") subcritical();
    if (cfg.which == "basis" || cfg.which == "basis_regularized") {
      if (cfg.L.size() != 1 || cfg.Lambda.size() != 1) throw ConfigError("density takes a single L and Lambda");
      check_basis();
    }
    if (cfg.momentum && (cfg.which == "uehling_exact" || cfg.which == "total_exact")) {
      if (cfg.grid_points < 2) throw ConfigError("grid-points must be >= 2");
      if (!(cfg.k_max > 0)) throw ConfigError("k-max must be > 0");
    } else if (!cfg.momentum) {
      position_grid();
    }
  } else if (cmd == "lamb-shift") {
    static const std::vector<std::string> sources = {"exact", "basis-raw", "basis-improved"};
    static const std::vector<std::string> vps = {"raw", "regularized", "exact", "uehling"};
    if (std::find(sources.begin(), sources.end(), cfg.source) == sources.end()) {
      throw ConfigError("--source must be exact|basis-raw|basis-improved");
    }
    if (std::find(vps.begin(), vps.end(), cfg.vp) == vps.end()) {
      throw ConfigError("--vp must be raw|regularized|exact|uehling");
    }
    if (cfg.source == "basis-improved" && cfg.vp == "raw") {
      throw ConfigError("the improved density cannot be paired with the raw basis vacuum polarization");
    }
    if (exact_pairing(cfg)) {
      for (double ic : cfg.inv_c) {
        if (!(ic > 0)) throw ConfigError("inv-c values must be > 0");
        if (!(cfg.Z < 2.0 / ic)) throw ConfigError("lamb-shift requires Z < 2c for every scanned c");
      }
    } else {
      subcritical();
      if (cfg.source != "exact" && !(cfg.Z > 0)) throw ConfigError("basis electron sources require Z > 0");
      if (cfg.L.size() != 1) throw ConfigError("basis lamb-shift scans take a single L");
      check_basis();
    }
  } else if (cmd == "appendix") {
    if (cfg.which != "a" && cfg.which != "b" && cfg.which != "c" && cfg.which != "d") {
      throw ConfigError("appendix needs --which a|b|c|d");
    }
    for (double v : cfg.r) {
      if (!(v > 0)) throw ConfigError("r must be > 0");
    }
    for (double v : cfg.eps) {
      if (!(v > 0)) throw ConfigError("eps must be > 0");
    }
    if (cfg.which == "d") {
      if (!(cfg.Z > 0)) throw ConfigError("appendix d requires Z > 0");
      check_basis();
    }
  } else if (cmd == "charge-summary") {
    subcritical();
  } else {
    throw ConfigError("unknown command '" + cmd + "'");
  }
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

inline std::string preamble(const RunConfig& cfg) {
  std::ostringstream o;
  o << "# qed1d " << version << "\n";
  o << "# command=" << cfg.command << "\n";
  o << "# m=" << fmt(cfg.m) << "\n# c=" << fmt(cfg.c) << "\n# Z=" << fmt(cfg.Z) << "\n";
  o << "# L=" << join(cfg.L) << "\n# Lambda=" << join(cfg.Lambda) << "\n";
  if (!cfg.which.empty()) o << "# which=" << cfg.which << "\n";
  if (cfg.command == "density") {
    o << "# momentum=" << (cfg.momentum ? "true" : "false") << "\n";
    o << "# grid-points=" << cfg.grid_points << "\n";
    o << "# x-max=" << fmt(cfg.x_max) << "\n# k-max=" << fmt(cfg.k_max) << "\n";
  }
  if (cfg.command == "lamb-shift") {
    o << "# source=" << cfg.source << "\n# vp=" << cfg.vp << "\n";
    if (exact_pairing(cfg)) o << "# inv-c=" << join(cfg.inv_c) << "\n";
  }
  if (!cfg.r.empty()) o << "# r=" << join(cfg.r) << "\n";
  if (!cfg.eps.empty()) o << "# eps=" << join(cfg.eps) << "\n";
  o << "# abs-tol=" << fmt(cfg.quad.abs_tol) << "\n# rel-tol=" << fmt(cfg.quad.rel_tol) << "\n";
  o << "# max-refinements=" << cfg.quad.max_refinements << "\n";
  return o.str();
}

// --- commands -------------------------------------------------------------

inline std::string cmd_bound_state(const RunConfig& cfg) {
  const PhysicalParams p(cfg.m, cfg.c, cfg.Z);
  const double exact = bound_state(p).energy;
  struct Point {
    double L, Lambda;
  };
  std::vector<Point> pts;
  for (double L : cfg.L) {
    for (double Lam : cfg.Lambda) pts.push_back({L, Lam});
  }
  auto energies = parallel_map<double>(
      pts.size(), [&](std::size_t i) { return basis_bound_state(p, BasisSpec(pts[i].L, pts[i].Lambda)).energy; },
      cfg.threads);
  std::ostringstream o;
  o << preamble(cfg) << "# exact_energy=" << fmt(exact) << "\n";
  o << "L,Lambda,n_max,energy,error_vs_exact\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const BasisSpec b(pts[i].L, pts[i].Lambda);
    o << fmt(pts[i].L) << "," << fmt(pts[i].Lambda) << "," << b.nmax() << "," << fmt(energies[i]) << ","
      << fmt(energies[i] - exact) << "\n";
  }
  return o.str();
}

inline std::string cmd_density(const RunConfig& cfg) {
  const PhysicalParams p(cfg.m, cfg.c, cfg.Z);
  std::ostringstream o;
  o << preamble(cfg);
  const bool exact = cfg.which == "uehling_exact" || cfg.which == "total_exact";
  if (exact && cfg.momentum) {
    const int n = cfg.grid_points;
    std::vector<double> ks(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) ks[static_cast<std::size_t>(i)] = -cfg.k_max + 2.0 * cfg.k_max * i / n;
    const bool ue = cfg.which == "uehling_exact";
    // constant part of the trace: 2 Z/((2 pi)^{3/2} c) first order, N0/sqrt(2 pi) all orders
    const double constant = ue ? 2.0 * p.Z() / (std::pow(2.0 * pi, 1.5) * p.c()) : delta_charge(p) / std::sqrt(2.0 * pi);
    auto vals = parallel_map<double>(
        ks.size(),
        [&](std::size_t i) {
          const Complex2x2 reg = ue ? uehling_momentum_density_regular(p, ks[i])
                                    : total_momentum_density_reg(p, ks[i], cfg.quad);
          return constant + reg.trace().real();
        },
        cfg.threads);
    o << "# constant=" << fmt(constant) << "\n";
    o << "k,value\n";
    for (std::size_t i = 0; i < ks.size(); ++i) o << fmt(ks[i]) << "," << fmt(vals[i]) << "\n";
    return o.str();
  }
  if (exact) {
    const auto grid = symmetric_grid(cfg.x_max, cfg.grid_points);
    const ScalarDistribution d = cfg.which == "uehling_exact" ? uehling_position_density(p, grid, cfg.quad, cfg.threads)
                                                              : total_position_density(p, grid, cfg.quad, cfg.threads);
    o << "# delta_coeff=" << fmt(d.delta_coeff()) << "\n";
    o << "x,value\n";
    for (std::size_t i = 0; i < grid.size(); ++i) o << fmt(grid[i]) << "," << fmt(d.values()[i]) << "\n";
    return o.str();
  }
  const BasisSpec b(cfg.L.front(), cfg.Lambda.front());
  const MomentumDensity md = vp_momentum_density(p, b);
  const bool regularized = cfg.which == "basis_regularized";
  std::optional<RegularizedDensity> reg;
  if (regularized) reg = regularize(md);
  const MomentumDensity& use = regularized ? reg->density : md;
  const double delta = regularized ? -reg->n_reg : 0.0;
  o << "# n_max=" << b.nmax() << "\n";
  if (regularized) o << "# k_max=" << fmt(reg->k_max) << "\n# N_reg=" << fmt(reg->n_reg) << "\n";
  o << "# delta_coeff=" << fmt(delta) << "\n";
  if (cfg.momentum) {
    // run one grid step past 2 Lambda so the vanishing tail is visible
    const int j_end = static_cast<int>(std::ceil(2.0 * b.Lambda() * b.L() / (2.0 * pi) - 1e-9));
    const int last = std::max(j_end, use.jmax() + 1);
    o << "k,value\n";
    for (int j = -last; j <= last; ++j) o << fmt(use.k(j)) << "," << fmt(use.trace(j).real()) << "\n";
    return o.str();
  }
  const auto grid = symmetric_grid(cfg.x_max, cfg.grid_points);
  const auto vals = vp_position_density(use, grid);
  o << "x,value\n";
  for (std::size_t i = 0; i < grid.size(); ++i) o << fmt(grid[i]) << "," << fmt(vals[i]) << "\n";
  return o.str();
}

inline VpVariant parse_vp(const std::string& s) {
  if (s == "raw") return VpVariant::raw;
  if (s == "regularized") return VpVariant::regularized;
  if (s == "exact") return VpVariant::exact;
  return VpVariant::uehling;
}

inline std::string cmd_lamb_shift(const RunConfig& cfg) {
  std::ostringstream o;
  o << preamble(cfg);
  const VpVariant vp = parse_vp(cfg.vp);
  std::vector<double> xs;
  std::vector<ShiftBreakdown> rows;
  if (exact_pairing(cfg)) {
    xs = cfg.inv_c;
    rows = parallel_map<ShiftBreakdown>(
        xs.size(),
        [&](std::size_t i) {
          const PhysicalParams p(cfg.m, 1.0 / xs[i], cfg.Z);
          return total_shift(DensitySource::exact(p), vp, std::nullopt, cfg.quad);
        },
        cfg.threads);
    o << "inv_c,dc,xc,db,xb,total\n";
  } else {
    xs = cfg.Lambda;
    const PhysicalParams p(cfg.m, cfg.c, cfg.Z);
    const double L = cfg.L.front();
    rows = parallel_map<ShiftBreakdown>(
        xs.size(),
        [&](std::size_t i) {
          const BasisSpec b(L, xs[i]);
          if (cfg.source == "exact") return total_shift(DensitySource::exact(p), vp, b, cfg.quad);
          return total_shift(DensitySource::basis(p, b, cfg.source == "basis-improved"), vp, b, cfg.quad);
        },
        cfg.threads);
    o << "Lambda,dc,xc,db,xb,total\n";
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& s = rows[i];
    o << fmt(xs[i]) << "," << fmt(s.dc) << "," << fmt(s.xc) << "," << fmt(s.db) << "," << fmt(s.xb) << ","
      << fmt(s.total()) << "\n";
  }
  return o.str();
}

inline std::string cmd_appendix(const RunConfig& cfg) {
  std::ostringstream o;
  o << preamble(cfg);
  if (cfg.which == "a") {
    struct Fn {
      const char* name;
      double (*f)(double);
      double target;
    };
    const std::vector<Fn> fns = {{"one", [](double) { return 1.0; }, 0.5},
                                 {"x", [](double x) { return x; }, 0.0},
                                 {"cos", [](double x) { return std::cos(x); }, 0.5}};
    o << "mollifier,function,eps,value,target\n";
    for (Mollifier k : {Mollifier::bump, Mollifier::bspline}) {
      const char* kn = k == Mollifier::bump ? "bump" : "bspline";
      for (const auto& fn : fns) {
        const auto est = mollifier_half_delta(fn.f, k);
        for (std::size_t i = 0; i < est.eps.size(); ++i) {
          o << kn << "," << fn.name << "," << fmt(est.eps[i]) << "," << fmt(est.values[i]) << "," << fmt(fn.target)
            << "\n";
        }
        // eps = 0 marks the extrapolated limit
        o << kn << "," << fn.name << ",0," << fmt(est.extrapolated) << "," << fmt(fn.target) << "\n";
      }
    }
  } else if (cfg.which == "b") {
    const PhysicalParams p(cfg.m, cfg.c, cfg.Z);
    o << "r,a,w_abs,det_ABCD,unitarity_defect,A,B\n";
    for (double r : cfg.r) {
      const AsymmetricCutoff ac = asymmetric_cutoff(p, r);
      const double unit = (ac.M * ac.M.adjoint() - Complex2x2::Identity()).cwiseAbs().maxCoeff();
      o << fmt(r) << "," << fmt(ac.a) << "," << fmt(std::abs(ac.w)) << "," << fmt(ac.A * ac.D - ac.B * ac.C) << ","
        << fmt(unit) << "," << fmt(ac.A) << "," << fmt(ac.B) << "\n";
    }
  } else if (cfg.which == "c") {
    const PhysicalParams p(cfg.m, cfg.c, cfg.Z);
    const double integral = singular_kernel_integral();
    o << "# integral_f=" << fmt(integral) << "\n";
    o << "eps,recovered_delta_coeff,target,integral_f\n";
    for (double e : cfg.eps) {
      o << fmt(e) << "," << fmt(averaged_delta_coefficient(p, e)) << "," << fmt(uehling_delta_coefficient(p)) << ","
        << fmt(integral) << "\n";
    }
  } else {
    const PhysicalParams p(cfg.m, cfg.c, cfg.Z);
    o << "L,Lambda,n_max,eps_L_Lambda,eps_L_inf,asymptotic_term\n";
    for (double L : cfg.L) {
      for (double Lam : cfg.Lambda) {
        const ConvergenceModel m = truncated_energy_model(p, L, Lam);
        o << fmt(L) << "," << fmt(Lam) << "," << m.nmax << "," << fmt(m.energy) << "," << fmt(m.energy_infinite) << ","
          << fmt(m.asymptotic_term) << "\n";
      }
    }
  }
  return o.str();
}

inline std::string cmd_charge_summary(const RunConfig& cfg) {
  const PhysicalParams p(cfg.m, cfg.c, cfg.Z);
  const ChargeSummary s = charge_summary(p);
  const double quad = regular_charge_quadrature(p, infinite_cutoff, cfg.quad);
  std::ostringstream o;
  o << preamble(cfg);
  o << "Z,N0,Nreg,Ntotal,Zren,Nreg_quadrature\n";
  o << fmt(cfg.Z) << "," << fmt(s.N0) << "," << fmt(s.Nreg) << "," << fmt(s.Ntotal) << "," << fmt(s.Zren) << ","
    << fmt(quad) << "\n";
  return o.str();
}

inline std::string dispatch(const RunConfig& cfg) {
  if (cfg.command == "bound-state") return cmd_bound_state(cfg);
  if (cfg.command == "density") return cmd_density(cfg);
  if (cfg.command == "lamb-shift") return cmd_lamb_shift(cfg);
  if (cfg.command == "appendix") return cmd_appendix(cfg);
  return cmd_charge_summary(cfg);
}

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_numerical = 3;

/// Parses, validates, computes, then writes. Nothing is written unless the
/// whole computation succeeded.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"One-dimensional QED model atom: bound states, vacuum polarization, energy shifts"};
  app.set_version_flag("--version", std::string("qed1d ") + version);
  app.fallthrough();
  app.require_subcommand(1);
  RawValues cli_values;
  std::string config_path;
  app.add_option("--config", config_path, "key=value or JSON config file; flags override it");
  for (const auto& info : known_keys()) {
    const std::string key = info.name;
    if (info.flag) {
      app.add_flag_function(
          "--" + key, [&cli_values, key](std::int64_t n) { cli_values[key] = {n > 0 ? "true" : "false"}; }, info.help);
    } else {
      auto* opt = app.add_option_function<std::vector<std::string>>(
          "--" + key, [&cli_values, key](const std::vector<std::string>& v) { cli_values[key] = v; }, info.help);
      if (info.repeatable) {
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->expected(1)->allow_extra_args(false);
      } else {
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->expected(1)->allow_extra_args(false);
      }
    }
  }
  app.add_subcommand("bound-state", "gap eigenvalue of the plane-wave Hamiltonian; columns L,Lambda,n_max,energy,error_vs_exact");
  app.add_subcommand("density",
                     "vacuum-polarization density (--which); columns x,value or k,value with --momentum; "
                     "delta coefficient in the preamble");
  app.add_subcommand("lamb-shift",
                     "first-order energy shift (--source, --vp); columns inv_c or Lambda, dc, xc, db, xb, total");
  app.add_subcommand("appendix",
                     "--which a: mollifier,function,eps,value,target (eps=0 is the extrapolated limit); "
                     "b: r,a,w_abs,det_ABCD,unitarity_defect,A,B; c: eps,recovered_delta_coeff,target,integral_f; "
                     "d: L,Lambda,n_max,eps_L_Lambda,eps_L_inf,asymptotic_term");
  app.add_subcommand("charge-summary", "columns Z,N0,Nreg,Ntotal,Zren,Nreg_quadrature");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }
  std::string command;
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();
  std::string text;
  RunConfig cfg;
  try {
    RawValues merged;
    if (!config_path.empty()) merged = read_config_file(config_path);
    for (const auto& [k, v] : cli_values) merged[k] = v;
    cfg = resolve(command, merged);
    validate(cfg);
    text = dispatch(cfg);
  } catch (const ConfigError& e) {
    err << "qed1d: configuration error: " << e.what() << "\n";
    return exit_config;
  } catch (const DomainError& e) {
    err << "qed1d: configuration error: " << e.what() << "\n";
    return exit_config;
  } catch (const NumericalError& e) {
    err << "qed1d: numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }
  if (cfg.out.empty()) {
    out << text;
    out.flush();
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      err << "qed1d: cannot write '" << cfg.out << "'\n";
      return exit_config;
    }
    f << text;
  }
  return exit_ok;
}

}  // namespace qed1d::cli

#endif  // QED1D_TOOLS_CLI_HPP
