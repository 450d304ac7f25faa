#pragma once

// Quantitative checks of the curvature bound, concavity propagation, the
// log-derivative bound, the boundary Poisson representation, the similarity
// scaling and the disk transfer. Universal constants are never hard-coded:
// every check reports the empirical supremum over its declared grid.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "minigraph/analytic.hpp"
#include "minigraph/errors.hpp"
#include "minigraph/level_curves.hpp"
#include "minigraph/quadrature.hpp"
#include "minigraph/weierstrass.hpp"

namespace minigraph {

/// Tensor grid over the half-plane. sigma nodes are sigma_max * i / n_sigma
/// for i = 1..n_sigma (or geometric between sigma_min and sigma_max when
/// `log_sigma`), tau nodes are uniform over [tau_min, tau_max].
struct SamplingGrid {
  double sigma_min = 0.0;
  double sigma_max = 10.0;
  int n_sigma = 50;
  double tau_min = -10.0;
  double tau_max = 10.0;
  int n_tau = 101;
  bool log_sigma = false;

  void validate() const {
    if (n_sigma < 1 || n_tau < 1) throw ParameterError("SamplingGrid: node counts must be positive");
    if (!(sigma_max > 0.0) || sigma_min < 0.0 || sigma_min >= sigma_max) {
      throw ParameterError("SamplingGrid: need 0 <= sigma_min < sigma_max");
    }
    if (log_sigma && !(sigma_min > 0.0)) throw ParameterError("SamplingGrid: log spacing needs sigma_min > 0");
    if (tau_min > tau_max) throw ParameterError("SamplingGrid: tau_min > tau_max");
  }

  [[nodiscard]] std::vector<double> sigmas() const {
    validate();
    std::vector<double> out;
    for (int i = 1; i <= n_sigma; ++i) {
      if (log_sigma) {
        const double t = n_sigma == 1 ? 1.0 : static_cast<double>(i - 1) / (n_sigma - 1);
        out.push_back(sigma_min * std::pow(sigma_max / sigma_min, t));
      } else {
        out.push_back(sigma_min + (sigma_max - sigma_min) * i / n_sigma);
      }
    }
    return out;
  }

  [[nodiscard]] std::vector<double> taus() const {
    validate();
    std::vector<double> out;
    if (n_tau == 1) return {0.5 * (tau_min + tau_max)};
    for (int j = 0; j < n_tau; ++j) out.push_back(tau_min + (tau_max - tau_min) * j / (n_tau - 1));
    return out;
  }

  [[nodiscard]] std::vector<HalfPlanePoint> points() const {
    std::vector<HalfPlanePoint> out;
    for (double s : sigmas()) {
      for (double t : taus()) out.push_back({s, t});
    }
    return out;
  }

  [[nodiscard]] std::string descriptor() const {
    std::ostringstream d;
    d << "sigma " << (log_sigma ? "geometric" : "uniform") << " (" << sigma_min << ", " << sigma_max << "] x"
      << n_sigma << "; tau [" << tau_min << ", " << tau_max << "] x" << n_tau;
    return d.str();
  }
};

struct VerificationReport {
  std::string check_name;
  bool passed = false;
  double empirical_constant = 0.0;
  HalfPlanePoint extremal_point{};
  double tolerance = 0.0;
  std::string grid_descriptor;
  std::string notes;
};

// ---------------------------------------------------------------------------
// Log-derivative bound  sigma |h''/h'| <= A
// ---------------------------------------------------------------------------

struct SupremumResult {
  double value = 0.0;
  HalfPlanePoint where{};
};

/// sup over `points` of sigma * |h''/h'|.
inline SupremumResult log_derivative_supremum(const WeierstrassPair& pair, const std::vector<HalfPlanePoint>& points) {
  SupremumResult sup{-1.0, {}};
  for (const auto& z : points) {
    const double v = z.sigma * std::abs(log_derivative(pair.h()(z)));
    if (v > sup.value) sup = {v, z};
  }
  if (points.empty()) sup.value = 0.0;
  return sup;
}

inline VerificationReport verify_lemma2(const WeierstrassPair& pair, const SamplingGrid& grid) {
  VerificationReport r;
  r.check_name = "lemma2";
  r.grid_descriptor = grid.descriptor();
  const auto sup = log_derivative_supremum(pair, grid.points());
  r.empirical_constant = sup.value;
  r.extremal_point = sup.where;
  r.passed = std::isfinite(sup.value);
  std::ostringstream notes;
  notes << "A_emp = sup sigma*|h''/h'|";
  if (const auto gamma = pair.family_gamma()) {
    r.tolerance = 1e-12;
    const bool within = sup.value <= *gamma - 1.0 + r.tolerance;
    r.passed = r.passed && within;
    notes << "; family bound gamma-1 = " << *gamma - 1.0 << (within ? " holds" : " VIOLATED");
  }
  r.notes = notes.str();
  return r;
}

// ---------------------------------------------------------------------------
// Curvature bound  |kappa| <= K / C
// ---------------------------------------------------------------------------

/// K_emp = max over the given levels and tau nodes of C*|kappa|, compared with
/// the proof-chain bound (k0/sqrt k) * A_emp. A_emp is taken over the grid and
/// the level-curve sample points together, so the chain
/// C|kappa| <= (k0/sqrt k) sigma |h''/h'| is also checked pointwise.
inline VerificationReport verify_thm1(const WeierstrassPair& pair, const std::vector<double>& levels,
                                      const SamplingGrid& grid, double tolerance = 1e-9) {
  VerificationReport r;
  r.check_name = "thm1";
  r.tolerance = tolerance;
  r.grid_descriptor = grid.descriptor();
  std::ostringstream notes;

  for (double c : levels) {
    if (!(c > 0.0)) throw ParameterError("verify_thm1: levels must be positive");
  }
  const double chain_factor = pair.k0() / std::sqrt(pair.k());
  std::vector<HalfPlanePoint> level_points;
  double k_emp = 0.0;
  HalfPlanePoint k_where{};
  bool pointwise_ok = true;
  HalfPlanePoint pointwise_violation{};
  for (double c : levels) {
    const double sigma0 = sigma_for_level(pair, c);
    for (double t : grid.taus()) {
      const HalfPlanePoint z{sigma0, t};
      level_points.push_back(z);
      const double v = c * std::abs(curvature_closed_form(pair, z));
      if (v >= k_emp) {
        k_emp = v;
        k_where = z;
      }
      const double chain = chain_factor * sigma0 * std::abs(log_derivative(pair.h()(z)));
      if (v > chain * (1.0 + 1e-12) + 1e-300 && pointwise_ok) {
        pointwise_ok = false;
        pointwise_violation = z;
      }
    }
  }
  auto all_points = grid.points();
  all_points.insert(all_points.end(), level_points.begin(), level_points.end());
  const auto a_emp = log_derivative_supremum(pair, all_points);
  const double bound = chain_factor * a_emp.value;

  r.empirical_constant = k_emp;
  r.extremal_point = k_where;
  r.passed = std::isfinite(k_emp) && k_emp <= bound + tolerance && pointwise_ok;
  notes << "K_emp = max C|kappa| = " << k_emp << "; proof-chain bound (k0/sqrt k)*A_emp = " << bound
        << " with A_emp = " << a_emp.value << " at (" << a_emp.where.sigma << ", " << a_emp.where.tau << ")";
  if (!pointwise_ok) {
    notes << "; pointwise chain violated at (" << pointwise_violation.sigma << ", " << pointwise_violation.tau << ")";
  }
  notes << "; levels:";
  for (double c : levels) notes << " " << c;
  r.notes = notes.str();
  return r;
}

// ---------------------------------------------------------------------------
// Concavity propagation
// ---------------------------------------------------------------------------

/// Four sub-checks, all required:
///  (a) y_tau >= 0 along the boundary trace sigma = 0,
///  (b) Re h' > 0 on the interior grid,
///  (c) Re h''/h' >= 0 on the boundary (d psi / d tau >= 0),
///  (d) kappa > 0 at every interior grid node.
inline VerificationReport verify_thm2(const WeierstrassPair& pair, const SamplingGrid& grid) {
  VerificationReport r;
  r.check_name = "thm2";
  r.grid_descriptor = grid.descriptor();
  r.tolerance = 0.0;
  std::ostringstream notes;
  std::vector<std::string> failures;
  auto where = [](HalfPlanePoint z) {
    std::ostringstream s;
    s << "(sigma=" << z.sigma << ", tau=" << z.tau << ")";
    return s.str();
  };

  bool boundary_ok = true;
  bool psi_ok = true;
  for (double t : grid.taus()) {
    const HalfPlanePoint z{0.0, t};
    try {
      if (boundary_ok && tau_partials(pair, z).y_tau < 0.0) {
        boundary_ok = false;
        failures.push_back("(a) boundary y_tau < 0 at " + where(z));
      }
      if (psi_ok && log_derivative(pair.h()(z)).real() < 0.0) {
        psi_ok = false;
        failures.push_back("(c) d psi/d tau < 0 at " + where(z));
      }
    } catch (const Error& e) {
      boundary_ok = psi_ok = false;
      failures.push_back(std::string("boundary evaluation failed at ") + where(z) + ": " + e.what());
      break;
    }
  }

  bool re_ok = true;
  bool kappa_ok = true;
  double min_kappa = std::numeric_limits<double>::infinity();
  HalfPlanePoint min_at{};
  for (const auto& z : grid.points()) {
    try {
      const Jet2 j = pair.h()(z);
      if (re_ok && !(j.d1.real() > 0.0)) {
        re_ok = false;
        failures.push_back("(b) Re h' <= 0 at " + where(z));
      }
      const double kappa = curvature_closed_form(pair, z);
      if (kappa < min_kappa) {
        min_kappa = kappa;
        min_at = z;
      }
    } catch (const Error& e) {
      re_ok = kappa_ok = false;
      failures.push_back(std::string("interior evaluation failed at ") + where(z) + ": " + e.what());
      break;
    }
  }
  if (!(min_kappa > 0.0)) {
    kappa_ok = false;
    std::ostringstream s;
    s << "(d) min kappa = " << min_kappa << " not > 0 at " << where(min_at);
    failures.push_back(s.str());
  }

  r.passed = boundary_ok && re_ok && psi_ok && kappa_ok;
  r.empirical_constant = std::isfinite(min_kappa) ? min_kappa : std::numeric_limits<double>::quiet_NaN();
  r.extremal_point = min_at;
  notes << "sub-checks: (a) boundary y_tau>=0 " << (boundary_ok ? "ok" : "FAIL") << ", (b) Re h'>0 "
        << (re_ok ? "ok" : "FAIL") << ", (c) d psi/d tau>=0 " << (psi_ok ? "ok" : "FAIL") << ", (d) kappa>0 "
        << (kappa_ok ? "ok" : "FAIL") << "; min kappa = " << min_kappa;
  for (const auto& f : failures) notes << "; " << f;
  if (pair.is_planar()) notes << "; trivial case where u is planar: curvature identically zero";
  r.notes = notes.str();
  return r;
}

// ---------------------------------------------------------------------------
// Boundary data and the Poisson representation of arg h'
// ---------------------------------------------------------------------------

/// psi(t) = arg h'(i t) on the boundary, either as a callable (optionally with
/// its derivative) or as tabulated samples interpolated linearly.
struct BoundaryArgumentData {
  std::vector<double> t;
  std::vector<double> psi_samples;
  double truncation = 1e4;
  std::function<double(double)> psi_fn;
  std::function<double(double)> psi_prime_fn;

  static BoundaryArgumentData from_function(std::function<double(double)> psi,
                                            std::function<double(double)> psi_prime = {}, double truncation = 1e4) {
    BoundaryArgumentData d;
    d.psi_fn = std::move(psi);
    d.psi_prime_fn = std::move(psi_prime);
    d.truncation = truncation;
    return d;
  }

  /// psi = arg h'(it), psi' = Re(h''/h')(it).
  static BoundaryArgumentData from_pair(const WeierstrassPair& pair, double truncation = 1e4) {
    return from_function([h = pair.h()](double t) { return std::arg(h({0.0, t}).d1); },
                         [h = pair.h()](double t) { return log_derivative(h({0.0, t})).real(); }, truncation);
  }

  static BoundaryArgumentData from_samples(std::vector<double> t, std::vector<double> psi, double truncation = 1e4) {
    if (t.size() != psi.size() || t.size() < 2) throw ParameterError("BoundaryArgumentData: need >= 2 matching samples");
    if (!std::is_sorted(t.begin(), t.end())) throw ParameterError("BoundaryArgumentData: sample points must be sorted");
    BoundaryArgumentData d;
    d.t = std::move(t);
    d.psi_samples = std::move(psi);
    d.truncation = truncation;
    return d;
  }

  [[nodiscard]] double psi(double s) const {
    if (psi_fn) return psi_fn(s);
    if (s <= t.front()) return psi_samples.front();
    if (s >= t.back()) return psi_samples.back();
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const auto i = static_cast<std::size_t>(it - t.begin());
    const double w = (s - t[i - 1]) / (t[i] - t[i - 1]);
    return (1.0 - w) * psi_samples[i - 1] + w * psi_samples[i];
  }

  [[nodiscard]] bool has_derivative() const { return static_cast<bool>(psi_prime_fn) || !psi_fn; }

  [[nodiscard]] double psi_prime(double s) const {
    if (psi_prime_fn) return psi_prime_fn(s);
    if (psi_fn) throw ParameterError("BoundaryArgumentData: no derivative available");
    if (s <= t.front() || s >= t.back()) return 0.0;
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const auto i = static_cast<std::size_t>(it - t.begin());
    return (psi_samples[i] - psi_samples[i - 1]) / (t[i] - t[i - 1]);
  }

  /// Tabulate psi at n uniform points of [-T, T] (for the |psi| <= pi/2 check).
  void tabulate(int n) {
    if (!psi_fn) return;
    t.clear();
    psi_samples.clear();
    for (int i = 0; i < n; ++i) {
      const double s = -truncation + 2.0 * truncation * i / (n - 1);
      t.push_back(s);
      psi_samples.push_back(psi_fn(s));
    }
  }

  [[nodiscard]] bool within_half_pi() const {
    return std::all_of(psi_samples.begin(), psi_samples.end(),
                       [](double p) { return std::abs(p) <= std::numbers::pi / 2.0; });
  }
};

struct PoissonEstimate {
  double value = 0.0;
  double error_estimate = 0.0;  // quadrature error + analytic tail bound
};

namespace detail {

/// Angles bounding [-T, T] under t = tau + sigma tan(theta).
inline std::pair<double, double> poisson_theta_range(const BoundaryArgumentData& data, HalfPlanePoint z) {
  if (!(z.sigma > 0.0)) throw DomainError("Poisson integral needs sigma > 0");
  if (!(data.truncation > std::abs(z.tau))) throw ParameterError("Poisson truncation must exceed |tau|");
  return {std::atan((-data.truncation - z.tau) / z.sigma), std::atan((data.truncation - z.tau) / z.sigma)};
}

inline double poisson_tail_bound(const BoundaryArgumentData& data, double sigma) {
  // (pi/2) * (2 sigma / pi) * int_{|t|>T} dt / t^2
  return (std::numbers::pi / 2.0) * (2.0 * sigma / std::numbers::pi) * (2.0 / data.truncation);
}

/// Integral over [lo, hi] in the angle variable of make(psi, psi_prime)(theta).
/// Tabulated data is split at the sample knots and each piece uses its own
/// linear segment, so every piece is smooth.
template <typename Make>
QuadratureResult<double> poisson_integrate(const BoundaryArgumentData& data, HalfPlanePoint z, Make&& make, double lo,
                                           double hi, double tol) {
  if (data.psi_fn) {
    return integrate(make([&](double t) { return data.psi(t); }, [&](double t) { return data.psi_prime(t); }), lo,
                     hi, tol);
  }
  const auto& t = data.t;
  const auto& p = data.psi_samples;
  std::vector<double> cuts{lo};
  for (double knot : t) {
    const double theta = std::atan((knot - z.tau) / z.sigma);
    if (theta > cuts.back() && theta < hi) cuts.push_back(theta);
  }
  cuts.push_back(hi);
  QuadratureResult<double> total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = z.tau + z.sigma * std::tan(0.5 * (cuts[i] + cuts[i + 1]));
    double slope = 0.0, t0 = 0.0, p0 = 0.0;
    if (mid <= t.front()) {
      p0 = p.front();
    } else if (mid >= t.back()) {
      p0 = p.back();
    } else {
      const auto k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), mid) - t.begin());
      slope = (p[k] - p[k - 1]) / (t[k] - t[k - 1]);
      t0 = t[k - 1];
      p0 = p[k - 1];
    }
    const auto f = make([=](double s) { return p0 + slope * (s - t0); }, [=](double) { return slope; });
    double err = 0.0;
    total.value += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, cuts[i], cuts[i + 1], 4, tol, &err);
    total.error_estimate += err;
  }
  if (!std::isfinite(total.value) || total.error_estimate > tol * (1.0 + std::abs(total.value))) {
    std::ostringstream msg;
    msg << "quadrature over tabulated boundary data did not converge: estimated error " << total.error_estimate
        << " above tolerance " << tol;
    throw QuadratureError(msg.str());
  }
  return total;
}

}  // namespace detail

/// Im log h'(zeta) = (sigma/pi) int psi(t) dt / (sigma^2 + (t - tau)^2), truncated to
/// [-T, T]. Evaluated in the angle variable t = tau + sigma tan(theta), where
/// the kernel becomes dtheta/pi.
inline PoissonEstimate poisson_im_log_hprime(const BoundaryArgumentData& data, HalfPlanePoint zeta,
                                             double tol = 1e-10) {
  const auto [lo, hi] = detail::poisson_theta_range(data, zeta);
  auto integrand = [&](auto psi, auto) {
    return [=](double theta) { return psi(zeta.tau + zeta.sigma * std::tan(theta)); };
  };
  const auto q = detail::poisson_integrate(data, zeta, integrand, lo, hi, tol);
  return {q.value / std::numbers::pi, q.error_estimate / std::numbers::pi + detail::poisson_tail_bound(data, zeta.sigma)};
}

struct PoissonRatioEstimate {
  PoissonEstimate kernel_form;                  // derivative-kernel integral
  std::optional<PoissonEstimate> by_parts_form;  // after integration by parts
  double agreement_delta = 0.0;                  // |kernel - by_parts| when both exist
};

/// Re h''/h'(zeta) = (2 sigma/pi) int (t - tau) psi(t) dt / (sigma^2 + (t - tau)^2)^2,
/// and, when psi' is available, the integrated-by-parts form
/// (sigma/pi) [-psi/(sigma^2+(t-tau)^2)]_{-T}^{T} + (sigma/pi) int psi'(t) dt/(sigma^2+(t-tau)^2).
inline PoissonRatioEstimate poisson_re_ratio(const BoundaryArgumentData& data, HalfPlanePoint zeta,
                                             double tol = 1e-10) {
  const auto [lo, hi] = detail::poisson_theta_range(data, zeta);
  const double sigma = zeta.sigma;
  const double tau = zeta.tau;
  // (2 sigma/pi) * (pi/2) * int_{|t|>T} dt / t^3
  const double tail = sigma / (data.truncation * data.truncation);

  PoissonRatioEstimate out;
  // In the angle variable the derivative kernel is sin(2 theta) / (pi sigma).
  auto kernel = [&](auto psi, auto) {
    return [=](double theta) { return std::sin(2.0 * theta) * psi(tau + sigma * std::tan(theta)); };
  };
  const auto q = detail::poisson_integrate(data, zeta, kernel, lo, hi, tol);
  out.kernel_form = {q.value / (std::numbers::pi * sigma), q.error_estimate / (std::numbers::pi * sigma) + tail};

  if (data.has_derivative()) {
    auto by_parts = [&](auto, auto psi_prime) {
      return [=](double theta) { return psi_prime(tau + sigma * std::tan(theta)); };
    };
    const auto p = detail::poisson_integrate(data, zeta, by_parts, lo, hi, tol);
    const double T = data.truncation;
    auto boundary_term = [&](double t) { return -data.psi(t) / (sigma * sigma + (t - tau) * (t - tau)); };
    const double bracket = sigma / std::numbers::pi * (boundary_term(T) - boundary_term(-T));
    out.by_parts_form = PoissonEstimate{bracket + p.value / std::numbers::pi, p.error_estimate / std::numbers::pi + tail};
    out.agreement_delta = std::abs(out.kernel_form.value - out.by_parts_form->value);
  }
  return out;
}

/// Reconstruct arg h' and Re h''/h' at `points` from the boundary data and
/// compare with the closed forms from the pair.
inline VerificationReport verify_poisson(const WeierstrassPair& pair, const BoundaryArgumentData& data,
                                         const std::vector<HalfPlanePoint>& points, double tolerance = 1e-4,
                                         double agreement_tolerance = 2e-4) {
  VerificationReport r;
  r.check_name = "poisson";
  r.tolerance = tolerance;
  std::ostringstream grid;
  grid << points.size() << " interior points, truncation T = " << data.truncation;
  r.grid_descriptor = grid.str();

  double worst_arg = 0.0;
  double worst_ratio = 0.0;
  double worst_agree = 0.0;
  HalfPlanePoint worst_at{};
  for (const auto& z : points) {
    const Jet2 j = pair.h()(z);
    const double arg_err = std::abs(poisson_im_log_hprime(data, z).value - std::arg(j.d1));
    const auto ratio = poisson_re_ratio(data, z);
    const double closed = log_derivative(j).real();
    double ratio_err = std::abs(ratio.kernel_form.value - closed);
    if (ratio.by_parts_form) ratio_err = std::max(ratio_err, std::abs(ratio.by_parts_form->value - closed));
    if (std::max(arg_err, ratio_err) > std::max(worst_arg, worst_ratio)) worst_at = z;
    worst_arg = std::max(worst_arg, arg_err);
    worst_ratio = std::max(worst_ratio, ratio_err);
    worst_agree = std::max(worst_agree, ratio.agreement_delta);
  }
  r.empirical_constant = std::max(worst_arg, worst_ratio);
  r.extremal_point = worst_at;
  r.passed = worst_arg <= tolerance && worst_ratio <= tolerance && worst_agree <= agreement_tolerance;
  std::ostringstream notes;
  notes << "max |Im log h' error| = " << worst_arg << "; max |Re h''/h' error| = " << worst_ratio
        << "; max kernel vs by-parts delta = " << worst_agree << " (tolerance " << agreement_tolerance << ")";
  r.notes = notes.str();
  return r;
}

// ---------------------------------------------------------------------------
// Similarity scaling
// ---------------------------------------------------------------------------

namespace detail {

inline std::pair<std::size_t, std::size_t> extremum_indices(const std::vector<double>& v) {
  const auto mx = std::max_element(v.begin(), v.end());
  const auto mn = std::min_element(v.begin(), v.end());
  return {static_cast<std::size_t>(mx - v.begin()), static_cast<std::size_t>(mn - v.begin())};
}

}  // namespace detail

/// c * kappa_scaled == kappa at every point, and the tau positions of the
/// curvature extrema along the level sigma = points[0].sigma coincide for the
/// original and scaled solution.
inline VerificationReport verify_scaling(const WeierstrassPair& pair, double c,
                                         const std::vector<HalfPlanePoint>& points, double tolerance = 1e-10,
                                         double tau_min = -10.0, double tau_max = 10.0, int n_tau = 401) {
  if (points.empty()) throw ParameterError("verify_scaling: no test points");
  const WeierstrassPair scaled = scale_solution(pair, c);
  VerificationReport r;
  r.check_name = "scaling";
  r.tolerance = tolerance;
  std::ostringstream grid;
  grid << points.size() << " points; extremum scan tau [" << tau_min << ", " << tau_max << "] x" << n_tau;
  r.grid_descriptor = grid.str();

  double worst = 0.0;
  HalfPlanePoint worst_at = points.front();
  for (const auto& z : points) {
    const double delta = std::abs(c * curvature_closed_form(scaled, z) - curvature_closed_form(pair, z));
    if (delta > worst) {
      worst = delta;
      worst_at = z;
    }
  }

  const double sigma0 = points.front().sigma;
  std::vector<double> k_orig;
  std::vector<double> k_scaled;
  for (int j = 0; j < n_tau; ++j) {
    const double t = tau_min + (tau_max - tau_min) * j / (n_tau - 1);
    k_orig.push_back(curvature_closed_form(pair, {sigma0, t}));
    k_scaled.push_back(curvature_closed_form(scaled, {sigma0, t}));
  }
  const auto [max_o, min_o] = detail::extremum_indices(k_orig);
  const auto [max_s, min_s] = detail::extremum_indices(k_scaled);
  const double dt = (tau_max - tau_min) / (n_tau - 1);
  auto near = [](std::size_t a, std::size_t b) { return (a > b ? a - b : b - a) <= 1; };
  const bool extrema_ok = near(max_o, max_s) && near(min_o, min_s);

  r.empirical_constant = worst;
  r.extremal_point = worst_at;
  r.passed = worst <= tolerance && extrema_ok;
  std::ostringstream notes;
  notes << "c = " << c << "; max |c*kappa_scaled - kappa| = " << worst << "; argmax tau " << tau_min + max_o * dt
        << " vs " << tau_min + max_s * dt << ", argmin tau " << tau_min + min_o * dt << " vs " << tau_min + min_s * dt
        << " along sigma = " << sigma0 << (extrema_ok ? "" : " (extrema MOVED)");
  r.notes = notes.str();
  return r;
}

// ---------------------------------------------------------------------------
// Transfer to the unit disk
// ---------------------------------------------------------------------------

/// H', H'' of H(w) = h((1+w)/(1-w)) at w = (zeta-1)/(zeta+1), from the chain rule.
struct DiskJet {
  Complex w{};
  Complex d1{};
  Complex d2{};
};

inline DiskJet disk_jet(const WeierstrassPair& pair, HalfPlanePoint zeta) {
  const Complex z = zeta.as_complex();
  const Complex zp1 = z + 1.0;
  const Jet2 j = pair.h()(zeta);
  DiskJet out;
  out.w = (z - 1.0) / zp1;
  // h' = H' * 2/(z+1)^2 ;  h'' = H'' * 4/(z+1)^4 - H' * 4/(z+1)^3
  out.d1 = j.d1 * zp1 * zp1 / 2.0;
  out.d2 = (j.d2 + out.d1 * 4.0 / (zp1 * zp1 * zp1)) * (zp1 * zp1 * zp1 * zp1) / 4.0;
  return out;
}

/// A1_emp = sup (1 - |w|) |H''/H'| and the pointwise inequality chain
///   |h''/h'| <= 2/|z+1| * (A1 / (|z+1| (1-|w|)) + 1)
///   sigma |h''/h'| <= 2 (A1 (|z+1| + |z-1|) / 4 + sigma) / |z+1|.
inline VerificationReport disk_transfer_check(const WeierstrassPair& pair, const SamplingGrid& grid) {
  VerificationReport r;
  r.check_name = "disk";
  r.grid_descriptor = grid.descriptor();
  r.tolerance = 1e-12;
  const auto points = grid.points();

  double a1 = 0.0;
  HalfPlanePoint a1_at{};
  for (const auto& z : points) {
    const DiskJet d = disk_jet(pair, z);
    if (!(std::abs(d.d1) >= kDerivativeFloor)) throw SingularityError("disk_transfer_check: H' vanishes");
    const double v = (1.0 - std::abs(d.w)) * std::abs(d.d2 / d.d1);
    if (v >= a1) {
      a1 = v;
      a1_at = z;
    }
  }

  bool chain_ok = true;
  std::ostringstream notes;
  double a_emp = 0.0;
  double worst_slack = std::numeric_limits<double>::infinity();
  for (const auto& z : points) {
    const Complex c = z.as_complex();
    const double ap = std::abs(c + 1.0);
    const double am = std::abs(c - 1.0);
    const double ratio = std::abs(log_derivative(pair.h()(z)));
    const double one_minus_w = 1.0 - std::abs((c - 1.0) / (c + 1.0));
    const double first = 2.0 / ap * (a1 / (ap * one_minus_w) + 1.0);
    const double last = 2.0 * (a1 * (ap + am) / 4.0 + z.sigma) / ap;
    a_emp = std::max(a_emp, z.sigma * ratio);
    worst_slack = std::min(worst_slack, last - z.sigma * ratio);
    if (ratio > first * (1.0 + r.tolerance) || z.sigma * ratio > last * (1.0 + r.tolerance)) {
      if (chain_ok) {
        notes << "chain violated at (" << z.sigma << ", " << z.tau << "); ";
      }
      chain_ok = false;
    }
  }
  r.empirical_constant = a1;
  r.extremal_point = a1_at;
  r.passed = std::isfinite(a1) && chain_ok;
  notes << "A1_emp = sup (1-|w|)|H''/H'| = " << a1 << "; A_emp = sup sigma|h''/h'| = " << a_emp
        << "; min slack of the final bound = " << worst_slack;
  r.notes = notes.str();
  return r;
}

// ---------------------------------------------------------------------------
// Asymptotic tangent directions of the boundary curve
// ---------------------------------------------------------------------------

struct AsymptoticAngles {
  double angle_plus = 0.0;   // limit of phi as tau -> +infinity
  double angle_minus = 0.0;  // limit of phi as tau -> -infinity
  bool converged_plus = false;
  bool converged_minus = false;
  std::vector<double> raw_plus;
  std::vector<double> raw_minus;

  /// Rotating by -rotation() brings the asymptotic directions to pi/2 +- alpha.
  [[nodiscard]] double rotation() const { return 0.5 * (angle_plus + angle_minus) - std::numbers::pi / 2.0; }
  [[nodiscard]] bool converged() const { return converged_plus && converged_minus; }
};

/// Tangent angle phi = atan2(y_tau, x_tau) along sigma = 0 at tau = +-probe,
/// extrapolated assuming an O(1/tau) approach. Converged iff the last two raw
/// estimates agree within `tolerance`.
inline AsymptoticAngles estimate_asymptotic_angles(const WeierstrassPair& pair, const std::vector<double>& tau_probe,
                                                   double tolerance = 1e-3) {
  if (tau_probe.size() < 2) throw ParameterError("estimate_asymptotic_angles: need at least two probes");
  for (std::size_t i = 0; i < tau_probe.size(); ++i) {
    if (!(tau_probe[i] > 0.0) || (i > 0 && !(tau_probe[i] > tau_probe[i - 1]))) {
      throw ParameterError("estimate_asymptotic_angles: probes must be positive and increasing");
    }
  }
  auto sequence = [&](double sign) {
    std::vector<double> phi;
    for (double p : tau_probe) {
      const TauPartials d = tau_partials(pair, {0.0, sign * p});
      double a = std::atan2(d.y_tau, d.x_tau);
      if (!phi.empty()) {
        while (a - phi.back() > std::numbers::pi) a -= 2.0 * std::numbers::pi;
        while (a - phi.back() < -std::numbers::pi) a += 2.0 * std::numbers::pi;
      }
      phi.push_back(a);
    }
    return phi;
  };
  auto limit = [&](const std::vector<double>& phi) {
    const std::size_t n = phi.size();
    const double t1 = tau_probe[n - 2];
    const double t2 = tau_probe[n - 1];
    return phi[n - 1] + (phi[n - 1] - phi[n - 2]) * t1 / (t2 - t1);
  };
  AsymptoticAngles out;
  out.raw_plus = sequence(1.0);
  out.raw_minus = sequence(-1.0);
  out.angle_plus = limit(out.raw_plus);
  out.angle_minus = limit(out.raw_minus);
  const auto n = tau_probe.size();
  out.converged_plus = std::abs(out.raw_plus[n - 1] - out.raw_plus[n - 2]) <= tolerance;
  out.converged_minus = std::abs(out.raw_minus[n - 1] - out.raw_minus[n - 2]) <= tolerance;
  return out;
}

}  // namespace minigraph
