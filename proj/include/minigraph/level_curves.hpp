#pragma once

// Level curves u = C of a minimal graph. Each one is the image of the vertical
// line sigma0 = C/k0 under f, traversed with increasing tau.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "minigraph/analytic.hpp"
#include "minigraph/errors.hpp"
#include "minigraph/weierstrass.hpp"

namespace minigraph {

struct LevelCurveSpec {
  double level = 0.0;  // C
  double tau_min = -20.0;
  double tau_max = 20.0;
  int n_samples = 401;
  double fd_step = 1e-4;

  void validate() const {
    if (!(std::isfinite(level) && level >= 0.0)) throw ParameterError("LevelCurveSpec: level must be >= 0");
    if (!(tau_min < tau_max)) throw ParameterError("LevelCurveSpec: tau_min must be < tau_max");
    if (n_samples < 2) throw ParameterError("LevelCurveSpec: n_samples must be >= 2");
    if (!(fd_step > 0.0)) throw ParameterError("LevelCurveSpec: fd_step must be > 0");
  }
};

struct LevelCurveSample {
  double tau = 0.0;
  double x = 0.0;
  double y = 0.0;
  double x_tau = 0.0;
  double y_tau = 0.0;
  double x_tautau = 0.0;
  double y_tautau = 0.0;
  double phi = 0.0;  // atan2(y_tau, x_tau)
  double s = 0.0;    // arc length from the first sample
  double kappa = 0.0;
  double kappa1 = 0.0;
};

/// First and second tau-derivatives of (x, y) = f(sigma + i tau).
struct TauPartials {
  double x_tau = 0.0;
  double y_tau = 0.0;
  double x_tautau = 0.0;
  double y_tautau = 0.0;
  // The same first derivatives in the factored form (|h'|^2 + k) * (-Im, Re)(1/conj h').
  double x_tau_factored = 0.0;
  double y_tau_factored = 0.0;
};

/// sigma0 = C / k0.
inline double sigma_for_level(const WeierstrassPair& pair, double level) {
  if (!(level >= 0.0)) throw ParameterError("sigma_for_level: level must be >= 0");
  return level / pair.k0();
}

inline TauPartials tau_partials(const WeierstrassPair& pair, HalfPlanePoint zeta) {
  detail::require_admissible(zeta, "tau_partials");
  const Jet2 j = pair.h()(zeta);
  if (!(std::abs(j.d1) >= kDerivativeFloor)) throw SingularityError("tau_partials: h' below derivative floor");
  const double k = pair.k();
  const Complex hp = j.d1;
  const Complex hpp = j.d2;
  const Complex k_over = k / hp;
  const Complex k_hpp_over_sq = k * hpp / (hp * hp);

  TauPartials p;
  p.x_tau = -(hp - k_over).imag();
  p.y_tau = (hp + k_over).real();
  p.x_tautau = -(hpp + k_hpp_over_sq).real();
  p.y_tautau = -(hpp - k_hpp_over_sq).imag();
  const double scale = std::norm(hp) + k;
  const Complex inv_conj = 1.0 / std::conj(hp);
  p.x_tau_factored = -scale * inv_conj.imag();
  p.y_tau_factored = scale * inv_conj.real();
  return p;
}

/// Signed curvature of a plane curve from its first and second parameter derivatives.
inline double curvature_generic(double x_tau, double y_tau, double x_tautau, double y_tautau) {
  const double speed2 = x_tau * x_tau + y_tau * y_tau;
  const double denom = speed2 * std::sqrt(speed2);
  if (!(denom > std::numeric_limits<double>::min())) {
    throw DegenerateError("curvature_generic: tangent vector vanishes");
  }
  return (x_tau * y_tautau - y_tau * x_tautau) / denom;
}

inline double curvature_generic(const TauPartials& p) {
  return curvature_generic(p.x_tau, p.y_tau, p.x_tautau, p.y_tautau);
}

/// kappa = |h'| / (|h'|^2 + k) * Re(h''/h').
///
/// Positive when the level curve bends away from {u > C}.
inline double curvature_closed_form(const WeierstrassPair& pair, HalfPlanePoint zeta) {
  detail::require_admissible(zeta, "curvature_closed_form");
  const Jet2 j = pair.h()(zeta);
  const Complex ratio = log_derivative(j);
  const double m = std::abs(j.d1);
  return m / (m * m + pair.k()) * ratio.real();
}

/// kappa1 = Re(h''/h') / |h'|, the curvature of tau -> h(sigma0 + i tau).
inline double curvature_h_image(const WeierstrassPair& pair, HalfPlanePoint zeta) {
  detail::require_admissible(zeta, "curvature_h_image");
  const Jet2 j = pair.h()(zeta);
  const Complex ratio = log_derivative(j);
  return ratio.real() / std::abs(j.d1);
}

struct OracleEstimate {
  double value = 0.0;
  double error_estimate = 0.0;  // Richardson estimate from the half-step result
};

/// Level-curve curvature from eval_surface alone: central differences of
/// tau -> (x, y) at `step` (three points) fed to curvature_generic. The same
/// stencil at step/2 supplies the truncation estimate |k(h) - k(h/2)| * 4/3.
/// Throws ConvergenceError when `tolerance` is given and the estimate exceeds it.
inline OracleEstimate curvature_fd_oracle(const WeierstrassPair& pair, double sigma0, double tau,
                                          double step = 1e-4,
                                          std::optional<double> tolerance = std::nullopt) {
  if (!(step > 0.0)) throw ParameterError("curvature_fd_oracle: step must be > 0");
  if (!(sigma0 >= 0.0)) throw DomainError("curvature_fd_oracle: sigma0 must be >= 0");

  auto at = [&](double t) {
    const SurfacePoint p = eval_surface(pair, {sigma0, t});
    return Complex{p.x, p.y};
  };
  const Complex centre = at(tau);
  auto central = [&](double h) {
    const Complex plus = at(tau + h);
    const Complex minus = at(tau - h);
    const Complex d1 = (plus - minus) / (2.0 * h);
    const Complex d2 = (plus - 2.0 * centre + minus) / (h * h);
    return curvature_generic(d1.real(), d1.imag(), d2.real(), d2.imag());
  };
  const double coarse = central(step);
  const double fine = central(0.5 * step);
  const OracleEstimate out{coarse, std::abs(coarse - fine) * 4.0 / 3.0};
  if (tolerance && out.error_estimate > *tolerance) {
    std::ostringstream msg;
    msg << "curvature_fd_oracle: estimated truncation error " << out.error_estimate
        << " exceeds tolerance " << *tolerance << " (step " << step << " too large)";
    throw ConvergenceError(msg.str());
  }
  return out;
}

namespace detail {

inline LevelCurveSample make_sample(const WeierstrassPair& pair, HalfPlanePoint zeta) {
  const SurfacePoint sp = eval_surface(pair, zeta);
  const TauPartials p = tau_partials(pair, zeta);
  LevelCurveSample s;
  s.tau = zeta.tau;
  s.x = sp.x;
  s.y = sp.y;
  s.x_tau = p.x_tau;
  s.y_tau = p.y_tau;
  s.x_tautau = p.x_tautau;
  s.y_tautau = p.y_tautau;
  s.phi = std::atan2(p.y_tau, p.x_tau);
  s.kappa = curvature_closed_form(pair, zeta);
  s.kappa1 = curvature_h_image(pair, zeta);
  return s;
}

}  // namespace detail

/// Uniform samples of the level curve u = C over [tau_min, tau_max]; arc length
/// by the trapezoid rule on the speed sqrt(x_tau^2 + y_tau^2).
inline std::vector<LevelCurveSample> sample_level_curve(const WeierstrassPair& pair, const LevelCurveSpec& spec) {
  spec.validate();
  const double sigma0 = sigma_for_level(pair, spec.level);
  const double dt = (spec.tau_max - spec.tau_min) / (spec.n_samples - 1);
  std::vector<LevelCurveSample> out;
  out.reserve(static_cast<std::size_t>(spec.n_samples));
  for (int i = 0; i < spec.n_samples; ++i) {
    const double tau = i + 1 == spec.n_samples ? spec.tau_max : spec.tau_min + i * dt;
    try {
      out.push_back(detail::make_sample(pair, {sigma0, tau}));
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << e.what() << " [level C=" << spec.level << ", tau=" << tau << "]";
      throw Error(msg.str());
    }
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double v0 = std::hypot(out[i - 1].x_tau, out[i - 1].y_tau);
    const double v1 = std::hypot(out[i].x_tau, out[i].y_tau);
    out[i].s = out[i - 1].s + 0.5 * (v0 + v1) * (out[i].tau - out[i - 1].tau);
  }
  return out;
}

struct BoundaryTrace {
  std::vector<LevelCurveSample> samples;
  bool y_tau_nonnegative = true;  // precondition of the concavity argument
  bool kappa_nonnegative = true;  // boundary bends away from D
};

/// The boundary curve f(i tau), u = 0.
inline BoundaryTrace boundary_trace(const WeierstrassPair& pair, const LevelCurveSpec& spec) {
  if (spec.level != 0.0) throw ParameterError("boundary_trace: level must be 0");
  BoundaryTrace trace;
  trace.samples = sample_level_curve(pair, spec);
  for (const auto& s : trace.samples) {
    if (s.y_tau < 0.0) trace.y_tau_nonnegative = false;
    if (s.kappa < 0.0) trace.kappa_nonnegative = false;
  }
  return trace;
}

}  // namespace minigraph
