#pragma once

// Minimal graphs over the right half-plane from Weierstrass data.
//
// The domain map is the harmonic shear f = h + conj(g) with g' = -k/h', and the
// height is u = k0 * Re(zeta), k = k0^2/4.

#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>

#include "minigraph/analytic.hpp"
#include "minigraph/errors.hpp"
#include "minigraph/quadrature.hpp"

namespace minigraph {

/// g given only through g' = -k/h' plus one anchor value; evaluated by segment quadrature.
struct NumericAntiderivative {
  HalfPlanePoint anchor{};
  Complex value{};
  double tolerance = 1e-10;
};

using CompanionMap = std::variant<AnalyticMap, NumericAntiderivative>;

/// Which catalog constructor produced a pair; custom pairs carry no parameter.
struct CatalogTag {
  enum class Kind { custom, lw_family, planar };
  Kind kind = Kind::custom;
  double parameter = 0.0;  // gamma for lw_family, slope a for planar
};

class WeierstrassPair {
 public:
  WeierstrassPair(AnalyticMap h, double k0, CompanionMap g, CatalogTag tag = {})
      : h_(std::move(h)), k0_(k0), k_(k0 * k0 / 4.0), g_(std::move(g)), tag_(tag) {
    if (!(std::isfinite(k0) && k0 > 0.0)) throw ParameterError("WeierstrassPair: k0 must be positive and finite");
    if (h_.empty()) throw ParameterError("WeierstrassPair: h is empty");
    if (const auto* num = std::get_if<NumericAntiderivative>(&g_)) {
      if (!num->anchor.is_admissible()) throw ParameterError("WeierstrassPair: anchor outside the closed half-plane");
      if (!(num->tolerance > 0.0)) throw ParameterError("WeierstrassPair: quadrature tolerance must be positive");
    }
  }

  /// Constructor that also receives k; it must equal k0^2/4.
  WeierstrassPair(AnalyticMap h, double k0, double k, CompanionMap g, CatalogTag tag = {})
      : WeierstrassPair(std::move(h), k0, std::move(g), tag) {
    if (std::abs(k - k_) > 4.0 * std::numeric_limits<double>::epsilon() * k_) {
      std::ostringstream msg;
      msg << "WeierstrassPair: k = " << k << " does not match k0^2/4 = " << k_;
      throw ParameterError(msg.str());
    }
  }

  [[nodiscard]] const AnalyticMap& h() const { return h_; }
  [[nodiscard]] double k0() const { return k0_; }
  [[nodiscard]] double k() const { return k_; }
  [[nodiscard]] const CompanionMap& g() const { return g_; }
  [[nodiscard]] const CatalogTag& tag() const { return tag_; }
  [[nodiscard]] bool has_closed_form_g() const { return std::holds_alternative<AnalyticMap>(g_); }

  [[nodiscard]] std::string name() const { return h_.name(); }

  [[nodiscard]] std::optional<double> family_gamma() const {
    if (tag_.kind == CatalogTag::Kind::lw_family) return tag_.parameter;
    return std::nullopt;
  }
  [[nodiscard]] bool is_planar() const { return tag_.kind == CatalogTag::Kind::planar; }

 private:
  AnalyticMap h_;
  double k0_;
  double k_;
  CompanionMap g_;
  CatalogTag tag_;
};

/// (x, y) in the domain D and the height u there.
struct SurfacePoint {
  double x = 0.0;
  double y = 0.0;
  double u = 0.0;
};

namespace detail {

inline void require_admissible(HalfPlanePoint zeta, const char* what) {
  if (!zeta.is_admissible()) {
    std::ostringstream msg;
    msg << what << ": point (" << zeta.sigma << ", " << zeta.tau << ") outside the closed half-plane";
    throw DomainError(msg.str());
  }
}

inline Complex checked_h_prime(const WeierstrassPair& pair, HalfPlanePoint zeta) {
  const Complex hp = pair.h()(zeta).d1;
  if (!(std::abs(hp) >= kDerivativeFloor)) throw SingularityError("h' below derivative floor");
  return hp;
}

}  // namespace detail

/// g'(zeta) = -k / h'(zeta).
inline Complex g_prime(const WeierstrassPair& pair, HalfPlanePoint zeta) {
  detail::require_admissible(zeta, "g_prime");
  return -pair.k() / detail::checked_h_prime(pair, zeta);
}

/// g(zeta), from the closed form when available, else g(anchor) - k * int dxi / h'(xi)
/// along the straight segment anchor -> zeta.
inline Complex g_value(const WeierstrassPair& pair, HalfPlanePoint zeta) {
  if (const auto* closed = std::get_if<AnalyticMap>(&pair.g())) return (*closed)(zeta).v;
  const auto& num = std::get<NumericAntiderivative>(pair.g());
  const Complex a = num.anchor.as_complex();
  const Complex dz = zeta.as_complex() - a;
  if (dz == Complex{}) return num.value;
  auto integrand = [&](double t) {
    return 1.0 / detail::checked_h_prime(pair, HalfPlanePoint::from_complex(a + t * dz));
  };
  const auto r = integrate(integrand, 0.0, 1.0, num.tolerance);
  return num.value - pair.k() * dz * r.value;
}

/// f(zeta) = h + conj(g) and u = k0 * sigma.
inline SurfacePoint eval_surface(const WeierstrassPair& pair, HalfPlanePoint zeta) {
  detail::require_admissible(zeta, "eval_surface");
  const Complex f = pair.h()(zeta).v + std::conj(g_value(pair, zeta));
  return {f.real(), f.imag(), pair.k0() * zeta.sigma};
}

/// The height recomputed as 2 Re[i * int sqrt(h' g') dzeta], integrated from the
/// boundary point i*tau (where u = 0) horizontally to zeta. The square-root
/// branch is tracked continuously along the path and its overall sign is fixed
/// by requiring u >= 0.
inline double height_via_integral(const WeierstrassPair& pair, HalfPlanePoint zeta, double tol = 1e-10) {
  detail::require_admissible(zeta, "height_via_integral");
  if (zeta.sigma == 0.0) return 0.0;
  auto product = [&](double s) {
    const HalfPlanePoint p{s, zeta.tau};
    const Complex hp = detail::checked_h_prime(pair, p);
    return hp * g_prime(pair, p);
  };
  const Complex reference = std::sqrt(product(0.0));
  auto integrand = [&](double s) {
    Complex r = std::sqrt(product(s));
    if ((r * std::conj(reference)).real() < 0.0) r = -r;
    return r;
  };
  // dzeta = ds along the horizontal path.
  const auto r = integrate(integrand, 0.0, zeta.sigma, tol);
  const double u = 2.0 * (Complex{0.0, 1.0} * r.value).real();
  return std::abs(u);
}

/// |h'|^2 - |g'|^2, the Jacobian determinant of f; positive for valid data.
inline double jacobian_det(const WeierstrassPair& pair, HalfPlanePoint zeta) {
  detail::require_admissible(zeta, "jacobian_det");
  const double m2 = std::norm(detail::checked_h_prime(pair, zeta));
  return m2 - pair.k() * pair.k() / m2;
}

/// |h'| - sqrt(k); nonnegative for Weierstrass data of a genuine solution.
inline double dilatation_margin(const WeierstrassPair& pair, HalfPlanePoint zeta) {
  detail::require_admissible(zeta, "dilatation_margin");
  return std::abs(detail::checked_h_prime(pair, zeta)) - std::sqrt(pair.k());
}

/// The concave-domain family h = (zeta+1)^gamma, g = -(zeta+1)^(2-gamma) / (gamma(2-gamma)),
/// height 2 Re zeta. gamma must lie in (1, 2); the endpoints are accepted only
/// with `allow_endpoints` (gamma = 2 uses the logarithmic antiderivative).
inline WeierstrassPair lw_family(double gamma, bool allow_endpoints = false) {
  const bool open_range = gamma > 1.0 && gamma < 2.0;
  const bool closed_range = gamma >= 1.0 && gamma <= 2.0;
  if (!open_range && !(allow_endpoints && closed_range)) {
    std::ostringstream msg;
    msg << "lw_family: gamma = " << gamma << " outside (1, 2)";
    throw ParameterError(msg.str());
  }
  std::ostringstream name;
  name << "lw(gamma=" << gamma << ")";
  AnalyticMap h(name.str(), {PowerTerm{1.0, 1.0, gamma}});
  AnalyticMap g = gamma == 2.0
                      ? AnalyticMap("g_" + name.str(), {LogTerm{-0.5, 1.0}})
                      : AnalyticMap("g_" + name.str(), {PowerTerm{-1.0 / (gamma * (2.0 - gamma)), 1.0, 2.0 - gamma}});
  return {std::move(h), 2.0, std::move(g), CatalogTag{CatalogTag::Kind::lw_family, gamma}};
}

/// h = a*zeta, g = -(k/a)*zeta: a half-plane domain with a planar graph. Needs a > sqrt(k).
inline WeierstrassPair planar_pair(double a, double k0) {
  if (!(k0 > 0.0)) throw ParameterError("planar_pair: k0 must be positive");
  const double k = k0 * k0 / 4.0;
  if (!(a > std::sqrt(k))) {
    std::ostringstream msg;
    msg << "planar_pair: slope a = " << a << " must exceed sqrt(k) = " << std::sqrt(k);
    throw ParameterError(msg.str());
  }
  std::ostringstream name;
  name << "planar(a=" << a << ",k0=" << k0 << ")";
  AnalyticMap h(name.str(), {AffineTerm{a, 0.0}});
  AnalyticMap g("g_" + name.str(), {AffineTerm{-k / a, 0.0}});
  return {std::move(h), k0, std::move(g), CatalogTag{CatalogTag::Kind::planar, a}};
}

/// The solution c*u(x/c, y/c): h -> c*h, k0 -> c*k0, and hence g -> c*g, f -> c*f.
inline WeierstrassPair scale_solution(const WeierstrassPair& pair, double c) {
  if (!(std::isfinite(c) && c > 0.0)) throw ParameterError("scale_solution: c must be positive");
  if (c == 1.0) return pair;
  CompanionMap g = std::visit(
      [c](const auto& companion) -> CompanionMap {
        using T = std::decay_t<decltype(companion)>;
        if constexpr (std::is_same_v<T, AnalyticMap>) {
          return companion.scaled(c);
        } else {
          NumericAntiderivative out = companion;
          out.value *= c;
          return out;
        }
      },
      pair.g());
  CatalogTag tag = pair.tag();
  if (tag.kind == CatalogTag::Kind::planar) tag.parameter *= c;
  // A scaled family member no longer has k0 = 2.
  if (tag.kind == CatalogTag::Kind::lw_family) tag.kind = CatalogTag::Kind::custom;
  return {pair.h().scaled(c), c * pair.k0(), std::move(g), tag};
}

}  // namespace minigraph
