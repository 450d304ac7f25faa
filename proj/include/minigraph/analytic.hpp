#pragma once

// Second-order jets of analytic maps on the right half-plane.
//
// Every catalog function is differentiated by its exact rule, so h, h' and h''
// reach the curvature formulas without any numerical differentiation.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "minigraph/errors.hpp"

namespace minigraph {

using Complex = std::complex<double>;

inline constexpr double kDerivativeFloor = 1e-300;

/// zeta = sigma + i tau. sigma > 0 in the interior; sigma == 0 is the boundary trace.
struct HalfPlanePoint {
  double sigma = 0.0;
  double tau = 0.0;

  [[nodiscard]] Complex as_complex() const { return {sigma, tau}; }
  [[nodiscard]] bool is_interior() const { return sigma > 0.0; }
  [[nodiscard]] bool is_admissible() const {
    return std::isfinite(sigma) && std::isfinite(tau) && sigma >= 0.0;
  }

  static HalfPlanePoint from_complex(Complex z) { return {z.real(), z.imag()}; }

  friend bool operator==(const HalfPlanePoint&, const HalfPlanePoint&) = default;
};

/// Value, first and second complex derivative of an analytic function at one point.
struct Jet2 {
  Complex v{};
  Complex d1{};
  Complex d2{};

  [[nodiscard]] bool is_finite() const {
    auto ok = [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
    return ok(v) && ok(d1) && ok(d2);
  }

  Jet2& operator+=(const Jet2& o) {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator*(Complex c, const Jet2& j) { return {c * j.v, c * j.d1, c * j.d2}; }
};

namespace detail {

inline bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

inline void require_finite(Complex c, const char* what) {
  if (!finite(c)) throw DomainError(std::string(what) + ": non-finite input");
}

inline bool is_nonnegative_integer(double p) {
  return p >= 0.0 && p <= 64.0 && std::floor(p) == p;
}

inline Complex ipow(Complex w, int n) {
  Complex r{1.0, 0.0};
  for (int i = 0; i < n; ++i) r *= w;
  return r;
}

inline Jet2 integer_power_jet(Complex w, int n) {
  Jet2 j;
  j.v = ipow(w, n);
  j.d1 = n >= 1 ? static_cast<double>(n) * ipow(w, n - 1) : Complex{};
  j.d2 = n >= 2 ? static_cast<double>(n) * (n - 1) * ipow(w, n - 2) : Complex{};
  return j;
}

}  // namespace detail

/// (zeta + offset)^exponent on the principal branch, with its first two derivatives.
///
/// Requires Re(zeta + offset) > 0 so that the shifted point stays in a right
/// half-plane and no branch cut is crossed. Nonnegative integer exponents are
/// evaluated by exact multiplication.
inline Jet2 jet_pow_affine(Complex offset, double exponent, HalfPlanePoint zeta) {
  detail::require_finite(offset, "jet_pow_affine");
  detail::require_finite(zeta.as_complex(), "jet_pow_affine");
  if (!std::isfinite(exponent)) throw DomainError("jet_pow_affine: non-finite exponent");
  const Complex w = zeta.as_complex() + offset;
  const double p = exponent;
  if (detail::is_nonnegative_integer(p)) return detail::integer_power_jet(w, static_cast<int>(p));
  if (!(w.real() > 0.0)) {
    std::ostringstream msg;
    msg << "jet_pow_affine: Re(zeta + offset) = " << w.real() << " <= 0, principal branch ambiguous";
    throw DomainError(msg.str());
  }
  return {std::pow(w, p), p * std::pow(w, p - 1.0), p * (p - 1.0) * std::pow(w, p - 2.0)};
}

/// slope * zeta + intercept.
inline Jet2 jet_affine(Complex slope, Complex intercept, HalfPlanePoint zeta) {
  return {slope * zeta.as_complex() + intercept, slope, Complex{}};
}

/// log(zeta + offset) on the principal branch; same domain rule as jet_pow_affine.
inline Jet2 jet_log_affine(Complex offset, HalfPlanePoint zeta) {
  detail::require_finite(offset, "jet_log_affine");
  const Complex w = zeta.as_complex() + offset;
  if (!(w.real() > 0.0)) throw DomainError("jet_log_affine: Re(zeta + offset) <= 0");
  const Complex inv = 1.0 / w;
  return {std::log(w), inv, -inv * inv};
}

/// h''/h'. Throws SingularityError when |h'| is below `floor`.
inline Complex log_derivative(const Jet2& jet, double floor = kDerivativeFloor) {
  if (!(std::abs(jet.d1) >= floor)) {
    throw SingularityError("log_derivative: |h'| below derivative floor (critical point)");
  }
  return jet.d2 / jet.d1;
}

// ---------------------------------------------------------------------------
// Composable catalog of analytic maps
// ---------------------------------------------------------------------------

/// slope * zeta + intercept
struct AffineTerm {
  Complex slope{};
  Complex intercept{};
};

/// coefficient * (zeta + offset)^exponent
struct PowerTerm {
  Complex coefficient{1.0, 0.0};
  Complex offset{};
  double exponent = 1.0;
};

/// coefficient * log(zeta + offset)
struct LogTerm {
  Complex coefficient{1.0, 0.0};
  Complex offset{};
};

using Term = std::variant<AffineTerm, PowerTerm, LogTerm>;

inline Jet2 evaluate_term(const Term& term, HalfPlanePoint zeta) {
  struct Visitor {
    HalfPlanePoint z;
    Jet2 operator()(const AffineTerm& t) const { return jet_affine(t.slope, t.intercept, z); }
    Jet2 operator()(const PowerTerm& t) const {
      if (detail::is_nonnegative_integer(t.exponent)) {
        // Polynomials are entire: skip the branch-cut domain check.
        return t.coefficient *
               detail::integer_power_jet(z.as_complex() + t.offset, static_cast<int>(t.exponent));
      }
      return t.coefficient * jet_pow_affine(t.offset, t.exponent, z);
    }
    Jet2 operator()(const LogTerm& t) const { return t.coefficient * jet_log_affine(t.offset, z); }
  };
  return std::visit(Visitor{zeta}, term);
}

inline Term scale_term(const Term& term, Complex c) {
  struct Visitor {
    Complex c;
    Term operator()(AffineTerm t) const {
      t.slope *= c;
      t.intercept *= c;
      return t;
    }
    Term operator()(PowerTerm t) const {
      t.coefficient *= c;
      return t;
    }
    Term operator()(LogTerm t) const {
      t.coefficient *= c;
      return t;
    }
  };
  return std::visit(Visitor{c}, term);
}

/// An analytic function on the right half-plane that evaluates to a Jet2.
///
/// Either a sum of catalog terms (exact jets, serializable, scalable) or an
/// arbitrary callable supplied by the caller. Evaluation is deterministic and
/// the object is immutable once built.
class AnalyticMap {
 public:
  using Evaluator = std::function<Jet2(HalfPlanePoint)>;

  AnalyticMap() = default;

  AnalyticMap(std::string name, std::vector<Term> terms)
      : name_(std::move(name)), terms_(std::move(terms)) {
    if (terms_.empty()) throw ParameterError("AnalyticMap: empty term list");
  }

  static AnalyticMap from_function(std::string name, Evaluator fn) {
    AnalyticMap m;
    m.name_ = std::move(name);
    m.custom_ = std::move(fn);
    return m;
  }

  [[nodiscard]] Jet2 operator()(HalfPlanePoint zeta) const {
    if (custom_) return custom_(zeta);
    Jet2 sum;
    for (const auto& t : terms_) sum += evaluate_term(t, zeta);
    return sum;
  }

  /// c * this. Used by the similarity scaling of a solution.
  [[nodiscard]] AnalyticMap scaled(double c) const {
    if (custom_) {
      return from_function(scaled_name(c), [fn = custom_, c](HalfPlanePoint z) { return Complex{c} * fn(z); });
    }
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(scale_term(t, c));
    return {scaled_name(c), std::move(out)};
  }

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] bool is_catalog() const { return !custom_; }
  [[nodiscard]] bool empty() const { return !custom_ && terms_.empty(); }

 private:
  [[nodiscard]] std::string scaled_name(double c) const {
    std::ostringstream s;
    s << c << "*" << name_;
    return s.str();
  }

  std::string name_;
  std::vector<Term> terms_;
  Evaluator custom_;
};

}  // namespace minigraph
