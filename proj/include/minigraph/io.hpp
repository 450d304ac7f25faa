#pragma once

// Text serialization: level-curve CSV/JSON, verification reports as JSON, the
// ScalarField2D grid format and CSV, and a small SVG plot of level curves.
// Floating point is always written with 17 significant digits.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "minigraph/errors.hpp"
#include "minigraph/graph_reconstruction.hpp"
#include "minigraph/level_curves.hpp"
#include "minigraph/verifiers.hpp"

namespace minigraph {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline constexpr const char* kLevelCurveColumns[] = {"tau",      "x",        "y",   "x_tau", "y_tau", "x_tautau",
                                                     "y_tautau", "phi",      "s",   "kappa", "kappa1"};

namespace detail {

inline std::vector<double> sample_row(const LevelCurveSample& s) {
  return {s.tau, s.x, s.y, s.x_tau, s.y_tau, s.x_tautau, s.y_tautau, s.phi, s.s, s.kappa, s.kappa1};
}

}  // namespace detail

inline void write_level_curve_csv(std::ostream& out, const std::vector<LevelCurveSample>& samples) {
  bool first = true;
  for (const char* c : kLevelCurveColumns) {
    out << (first ? "" : ",") << c;
    first = false;
  }
  out << '\n';
  for (const auto& s : samples) {
    const auto row = detail::sample_row(s);
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

/// Parses the CSV written above; the header must match exactly.
inline std::vector<LevelCurveSample> read_level_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("level-curve CSV: missing header");
  std::string expected;
  for (const char* c : kLevelCurveColumns) expected += (expected.empty() ? "" : ",") + std::string(c);
  if (line != expected) throw Error("level-curve CSV: unexpected header '" + line + "'");
  std::vector<LevelCurveSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != std::size(kLevelCurveColumns)) throw Error("level-curve CSV: wrong column count");
    out.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]});
  }
  return out;
}

inline Json level_curve_to_json(const std::vector<LevelCurveSample>& samples) {
  Json arr = Json::array();
  for (const auto& s : samples) {
    Json rec;
    const auto row = detail::sample_row(s);
    for (std::size_t i = 0; i < row.size(); ++i) rec[kLevelCurveColumns[i]] = row[i];
    arr.push_back(std::move(rec));
  }
  return arr;
}

inline Json report_to_json(const VerificationReport& r) {
  Json j;
  j["check_name"] = r.check_name;
  j["passed"] = r.passed;
  j["empirical_constant"] = r.empirical_constant;
  j["extremal_point"] = Json{{"sigma", r.extremal_point.sigma}, {"tau", r.extremal_point.tau}};
  j["tolerance"] = r.tolerance;
  j["grid_descriptor"] = r.grid_descriptor;
  j["notes"] = r.notes;
  return j;
}

inline VerificationReport report_from_json(const Json& j) {
  VerificationReport r;
  r.check_name = j.at("check_name").get<std::string>();
  r.passed = j.at("passed").get<bool>();
  r.empirical_constant = j.at("empirical_constant").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                              : j.at("empirical_constant").get<double>();
  r.extremal_point = {j.at("extremal_point").at("sigma").get<double>(), j.at("extremal_point").at("tau").get<double>()};
  r.tolerance = j.at("tolerance").get<double>();
  r.grid_descriptor = j.at("grid_descriptor").get<std::string>();
  r.notes = j.at("notes").get<std::string>();
  return r;
}

// ---------------------------------------------------------------------------
// ScalarField2D
// ---------------------------------------------------------------------------

/// Header "x0 y0 h nx ny", then ny rows (j = 0 first) of nx values; "nan" marks masked nodes.
inline void write_field_grid(std::ostream& out, const ScalarField2D& f) {
  out << format_double(f.x0) << ' ' << format_double(f.y0) << ' ' << format_double(f.spacing) << ' ' << f.nx << ' '
      << f.ny << '\n';
  for (int j = 0; j < f.ny; ++j) {
    for (int i = 0; i < f.nx; ++i) {
      out << (i ? " " : "") << (f.valid(i, j) ? format_double(f.at(i, j)) : std::string("nan"));
    }
    out << '\n';
  }
}

inline ScalarField2D read_field_grid(std::istream& in) {
  double x0 = 0, y0 = 0, h = 0;
  int nx = 0, ny = 0;
  if (!(in >> x0 >> y0 >> h >> nx >> ny)) throw Error("field grid: malformed header");
  ScalarField2D f(x0, y0, h, nx, ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      std::string tok;
      if (!(in >> tok)) throw Error("field grid: truncated data");
      if (tok == "nan") continue;
      f.set(i, j, std::stod(tok));
    }
  }
  return f;
}

inline void write_field_csv(std::ostream& out, const ScalarField2D& f) {
  out << "x,y,u,mask\n";
  for (int j = 0; j < f.ny; ++j) {
    for (int i = 0; i < f.nx; ++i) {
      const bool v = f.valid(i, j);
      out << format_double(f.x(i)) << ',' << format_double(f.y(j)) << ','
          << (v ? format_double(f.at(i, j)) : std::string("nan")) << ',' << (v ? 1 : 0) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

struct SvgCurve {
  double level = 0.0;
  std::vector<LevelCurveSample> samples;
};

/// Level curves as colour-coded segments (blue: kappa < 0, red: kappa > 0,
/// saturation by |kappa| relative to the plot maximum), on equal axis scales.
inline void write_level_curves_svg(std::ostream& out, const std::vector<SvgCurve>& curves, int width = 800,
                                   int height = 800) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin, kmax = 0.0;
  for (const auto& c : curves) {
    for (const auto& s : c.samples) {
      xmin = std::min(xmin, s.x);
      xmax = std::max(xmax, s.x);
      ymin = std::min(ymin, s.y);
      ymax = std::max(ymax, s.y);
      kmax = std::max(kmax, std::abs(s.kappa));
    }
  }
  if (!std::isfinite(xmin)) xmin = ymin = 0.0, xmax = ymax = 1.0;
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double pad = 0.05 * span;
  auto px = [&](double x) { return (x - xmin + pad) / (span + 2 * pad) * width; };
  auto py = [&](double y) { return height - (y - ymin + pad) / (span + 2 * pad) * height; };
  auto colour = [&](double k) {
    const double t = kmax > 0.0 ? std::min(1.0, std::abs(k) / kmax) : 0.0;
    const int hi = 40 + static_cast<int>(215 * t);
    std::ostringstream c;
    if (k > 0.0) c << "rgb(" << hi << ",40,40)";
    else if (k < 0.0) c << "rgb(40,40," << hi << ")";
    else c << "rgb(40,40,40)";
    return c.str();
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (xmin - pad < 0.0 && xmax + pad > 0.0) {
    out << "<line x1=\"" << format_double(px(0)) << "\" y1=\"0\" x2=\"" << format_double(px(0)) << "\" y2=\"" << height
        << "\" stroke=\"#bbb\" stroke-width=\"1\"/>\n";
  }
  if (ymin - pad < 0.0 && ymax + pad > 0.0) {
    out << "<line x1=\"0\" y1=\"" << format_double(py(0)) << "\" x2=\"" << width << "\" y2=\"" << format_double(py(0))
        << "\" stroke=\"#bbb\" stroke-width=\"1\"/>\n";
  }
  for (const auto& c : curves) {
    out << "<g data-level=\"" << format_double(c.level) << "\" stroke-width=\"" << (c.level == 0.0 ? 3 : 2) << "\">\n";
    for (std::size_t i = 1; i < c.samples.size(); ++i) {
      const auto& a = c.samples[i - 1];
      const auto& b = c.samples[i];
      out << "<line x1=\"" << format_double(px(a.x)) << "\" y1=\"" << format_double(py(a.y)) << "\" x2=\""
          << format_double(px(b.x)) << "\" y2=\"" << format_double(py(b.y)) << "\" stroke=\""
          << colour(0.5 * (a.kappa + b.kappa)) << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
}

/// Write `content` to `path` through a temporary file and rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << content;
    if (!f) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace minigraph
