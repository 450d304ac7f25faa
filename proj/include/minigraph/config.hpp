#pragma once

// Declarative run configuration (INI-style "key = value" sections; comments
// start a line with ';').
//
//   [pair]
//   kind = lw                      (lw | planar | custom)
//   gamma = 1.5                    (lw; allow_endpoints = true admits 1 and 2)
//   a = 2                          (planar)
//   k0 = 2                         (planar, custom)
//   h = power(1, 1, 1.5) + affine(0.1, 0)    (custom: sum of terms)
//   anchor = 0, 0                  (custom: anchor zeta as sigma, tau)
//   anchor_g = -1.3333333333333333, 0        (custom: g(anchor) as re, im)
//
//   [levels]      values = 0, 1, 2
//   [tau]         min, max, n
//   [grid]        x0, x1, y0, y1, h
//   [sweep]       sigma_min, sigma_max, n_sigma, tau_min, tau_max, n_tau
//   [verify]      scale_c
//   [tolerances]  quadrature, thm1, scaling, poisson, poisson_agreement, fd_step, angle
//   [output]      dir, formats = csv, json, svg
//
// Term syntax: power(c, a, p) = c (zeta + a)^p, affine(s, b) = s zeta + b,
// log(c, a) = c log(zeta + a). Complex parameters are written re:im.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "minigraph/analytic.hpp"
#include "minigraph/errors.hpp"
#include "minigraph/graph_reconstruction.hpp"
#include "minigraph/verifiers.hpp"
#include "minigraph/weierstrass.hpp"

namespace minigraph {

struct PairSpec {
  std::string kind = "lw";
  double gamma = 1.5;
  bool allow_endpoints = false;
  double a = 2.0;
  double k0 = 2.0;
  std::string h_expression;
  HalfPlanePoint anchor{};
  Complex anchor_g{};
};

struct TauWindow {
  double min = -20.0;
  double max = 20.0;
  int n = 401;
};

struct GridSpec {
  Window window{0.5, 3.0, -2.0, 2.0};
  double spacing = 1.0 / 32.0;
};

struct RunConfig {
  PairSpec pair;
  std::vector<double> levels{0.0, 1.0, 2.0};
  TauWindow tau;
  GridSpec grid;
  SamplingGrid sweep{};
  double scale_c = 2.0;
  std::map<std::string, double> tolerances{
      {"quadrature", 1e-10}, {"thm1", 1e-9}, {"scaling", 1e-10}, {"poisson", 1e-4}, {"poisson_agreement", 2e-4},
      {"fd_step", 1e-4},     {"angle", 1e-3}};
  std::filesystem::path output_dir = "out";
  std::vector<std::string> formats{"csv"};

  [[nodiscard]] double tolerance(const std::string& name) const {
    const auto it = tolerances.find(name);
    if (it == tolerances.end()) throw ParameterError("unknown tolerance '" + name + "'");
    return it->second;
  }

  void validate() const {
    for (const auto& [name, value] : tolerances) {
      if (!(value > 0.0)) throw ParameterError("tolerance '" + name + "' must be positive");
    }
    for (double c : levels) {
      if (!(c >= 0.0)) throw ParameterError("levels must be nonnegative");
    }
    if (!(tau.min < tau.max) || tau.n < 2) throw ParameterError("tau window must satisfy min < max, n >= 2");
    if (!(grid.spacing > 0.0)) throw ParameterError("grid spacing must be positive");
    if (!(grid.window.x_max > grid.window.x_min) || !(grid.window.y_max > grid.window.y_min)) {
      throw ParameterError("grid window is empty");
    }
    sweep.validate();
    if (!(scale_c > 0.0)) throw ParameterError("scale_c must be positive");
    for (const auto& f : formats) {
      if (f != "csv" && f != "json" && f != "svg") throw ParameterError("unknown output format '" + f + "'");
    }
  }
};

namespace detail {

inline std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) {
    part = trim(part);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

inline double parse_real(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (trim(s.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ParameterError("not a number: '" + s + "'");
}

inline Complex parse_complex(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {parse_real(s), 0.0};
  return {parse_real(s.substr(0, colon)), parse_real(s.substr(colon + 1))};
}

}  // namespace detail

inline std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& p : detail::split(s, ',')) out.push_back(detail::parse_real(p));
  return out;
}

/// "power(1, 1, 1.5) + affine(0.5:0, 0)" -> terms.
inline std::vector<Term> parse_terms(const std::string& expr) {
  static const std::regex term_re(R"(\s*(power|affine|log)\s*\(([^)]*)\)\s*)");
  std::vector<Term> terms;
  for (const auto& piece : detail::split(expr, '+')) {
    std::smatch m;
    if (!std::regex_match(piece, m, term_re)) throw ParameterError("cannot parse term '" + piece + "'");
    const auto args = detail::split(m[2].str(), ',');
    const std::string kind = m[1].str();
    if (kind == "power") {
      if (args.size() != 3) throw ParameterError("power(c, a, p) takes three arguments");
      terms.emplace_back(PowerTerm{detail::parse_complex(args[0]), detail::parse_complex(args[1]), detail::parse_real(args[2])});
    } else if (kind == "affine") {
      if (args.size() != 2) throw ParameterError("affine(s, b) takes two arguments");
      terms.emplace_back(AffineTerm{detail::parse_complex(args[0]), detail::parse_complex(args[1])});
    } else {
      if (args.size() != 2) throw ParameterError("log(c, a) takes two arguments");
      terms.emplace_back(LogTerm{detail::parse_complex(args[0]), detail::parse_complex(args[1])});
    }
  }
  if (terms.empty()) throw ParameterError("empty h expression");
  return terms;
}

inline WeierstrassPair make_pair(const PairSpec& spec, double quadrature_tolerance = 1e-10) {
  if (spec.kind == "lw") return lw_family(spec.gamma, spec.allow_endpoints);
  if (spec.kind == "planar") return planar_pair(spec.a, spec.k0);
  if (spec.kind == "custom") {
    AnalyticMap h("custom(" + spec.h_expression + ")", parse_terms(spec.h_expression));
    return {std::move(h), spec.k0, NumericAntiderivative{spec.anchor, spec.anchor_g, quadrature_tolerance}};
  }
  throw ParameterError("unknown pair kind '" + spec.kind + "'");
}

/// Apply "NAME=VALUE" to the tolerance table.
inline void apply_tolerance_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ParameterError("--tol expects NAME=VALUE, got '" + assignment + "'");
  const std::string name = detail::trim(assignment.substr(0, eq));
  if (!cfg.tolerances.count(name)) throw ParameterError("unknown tolerance '" + name + "'");
  cfg.tolerances[name] = detail::parse_real(assignment.substr(eq + 1));
}

/// "x0,x1,y0,y1,h"
inline void apply_grid_override(RunConfig& cfg, const std::string& s) {
  const auto v = parse_real_list(s);
  if (v.size() != 5) throw ParameterError("--grid expects x0,x1,y0,y1,h");
  cfg.grid.window = {v[0], v[1], v[2], v[3]};
  cfg.grid.spacing = v[4];
}

/// "a,b,n"
inline void apply_tau_override(RunConfig& cfg, const std::string& s) {
  const auto v = parse_real_list(s);
  if (v.size() != 3) throw ParameterError("--tau expects a,b,n");
  cfg.tau = {v[0], v[1], static_cast<int>(std::lround(v[2]))};
}

inline RunConfig parse_run_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  auto real = [&](const std::string& key, double& out) {
    if (auto v = tree.get_optional<std::string>(key)) out = detail::parse_real(detail::trim(*v));
  };
  auto integer = [&](const std::string& key, int& out) {
    if (auto v = tree.get_optional<std::string>(key)) out = static_cast<int>(std::lround(detail::parse_real(*v)));
  };
  auto text = [&](const std::string& key, std::string& out) {
    if (auto v = tree.get_optional<std::string>(key)) out = detail::trim(*v);
  };

  text("pair.kind", cfg.pair.kind);
  real("pair.gamma", cfg.pair.gamma);
  if (auto v = tree.get_optional<std::string>("pair.allow_endpoints")) {
    cfg.pair.allow_endpoints = detail::trim(*v) == "true" || detail::trim(*v) == "1";
  }
  real("pair.a", cfg.pair.a);
  real("pair.k0", cfg.pair.k0);
  text("pair.h", cfg.pair.h_expression);
  if (auto v = tree.get_optional<std::string>("pair.anchor")) {
    const auto p = parse_real_list(*v);
    if (p.size() != 2) throw ParameterError("pair.anchor expects sigma, tau");
    cfg.pair.anchor = {p[0], p[1]};
  }
  if (auto v = tree.get_optional<std::string>("pair.anchor_g")) {
    const auto p = parse_real_list(*v);
    if (p.size() != 2) throw ParameterError("pair.anchor_g expects re, im");
    cfg.pair.anchor_g = {p[0], p[1]};
  }
  if (auto v = tree.get_optional<std::string>("levels.values")) cfg.levels = parse_real_list(*v);
  real("tau.min", cfg.tau.min);
  real("tau.max", cfg.tau.max);
  integer("tau.n", cfg.tau.n);
  real("grid.x0", cfg.grid.window.x_min);
  real("grid.x1", cfg.grid.window.x_max);
  real("grid.y0", cfg.grid.window.y_min);
  real("grid.y1", cfg.grid.window.y_max);
  real("grid.h", cfg.grid.spacing);
  real("sweep.sigma_min", cfg.sweep.sigma_min);
  real("sweep.sigma_max", cfg.sweep.sigma_max);
  integer("sweep.n_sigma", cfg.sweep.n_sigma);
  real("sweep.tau_min", cfg.sweep.tau_min);
  real("sweep.tau_max", cfg.sweep.tau_max);
  integer("sweep.n_tau", cfg.sweep.n_tau);
  real("verify.scale_c", cfg.scale_c);
  if (const auto tol = tree.get_child_optional("tolerances")) {
    for (const auto& [name, node] : *tol) {
      apply_tolerance_override(cfg, name + "=" + node.get_value<std::string>());
    }
  }
  if (auto v = tree.get_optional<std::string>("output.dir")) cfg.output_dir = detail::trim(*v);
  if (auto v = tree.get_optional<std::string>("output.formats")) cfg.formats = detail::split(*v, ',');
  cfg.validate();
  return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file " + path.string());
  return parse_run_config(in);
}

}  // namespace minigraph
