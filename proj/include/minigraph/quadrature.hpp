#pragma once

// Thin adapter over Boost.Math adaptive Gauss-Kronrod (G7/K15).

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <sstream>

#include "minigraph/errors.hpp"

namespace minigraph {

template <typename Value>
struct QuadratureResult {
  Value value{};
  double error_estimate = 0.0;
};

inline constexpr unsigned kQuadratureMaxDepth = 20;

/// Adaptive integral of `f` over [a, b] to relative tolerance `tol`.
/// Throws QuadratureError when the Kronrod error estimate stays above
/// tol * (1 + |I|) or the result is not finite.
template <typename F>
auto integrate(F&& f, double a, double b, double tol = 1e-10) {
  using Value = decltype(f(a));
  double err = 0.0;
  Value value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, kQuadratureMaxDepth, tol, &err);
  using std::abs;
  const double magnitude = abs(value);
  if (!std::isfinite(magnitude) || err > tol * (1.0 + magnitude)) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b << "]: estimated error " << err
        << " above tolerance " << tol;
    throw QuadratureError(msg.str());
  }
  return QuadratureResult<Value>{value, err};
}

}  // namespace minigraph
