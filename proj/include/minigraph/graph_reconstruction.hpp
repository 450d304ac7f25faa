#pragma once

// u as a genuine function of (x, y): invert f on a Euclidean grid and apply
// centered second-order stencils for the minimal surface residual, the
// Laplacian, the operator F = u_y^2 u_xx + u_x^2 u_yy - 2 u_x u_y u_xy and the
// level-set curvature F / |grad u|^3.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "minigraph/analytic.hpp"
#include "minigraph/errors.hpp"
#include "minigraph/weierstrass.hpp"

namespace minigraph {

/// Uniform grid of u-values. Node (i, j) sits at (x0 + i*h, y0 + j*h) and is
/// stored at index j*nx + i. mask[idx] marks nodes that carry a value.
struct ScalarField2D {
  double x0 = 0.0;
  double y0 = 0.0;
  double spacing = 1.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  ScalarField2D() = default;
  ScalarField2D(double x0_, double y0_, double h, int nx_, int ny_)
      : x0(x0_), y0(y0_), spacing(h), nx(nx_), ny(ny_),
        values(static_cast<std::size_t>(nx_) * ny_, std::numeric_limits<double>::quiet_NaN()),
        mask(static_cast<std::size_t>(nx_) * ny_, 0) {
    if (!(h > 0.0) || nx_ < 1 || ny_ < 1) throw ParameterError("ScalarField2D: invalid shape");
  }

  [[nodiscard]] std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  [[nodiscard]] double x(int i) const { return x0 + i * spacing; }
  [[nodiscard]] double y(int j) const { return y0 + j * spacing; }
  [[nodiscard]] bool in_range(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }
  [[nodiscard]] bool valid(int i, int j) const { return in_range(i, j) && mask[index(i, j)] != 0; }
  [[nodiscard]] double at(int i, int j) const { return values[index(i, j)]; }

  void set(int i, int j, double v) {
    values[index(i, j)] = v;
    mask[index(i, j)] = 1;
  }

  /// All 8 neighbours (and the node itself) carry values.
  [[nodiscard]] bool interior(int i, int j) const {
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (!valid(i + di, j + dj)) return false;
      }
    }
    return true;
  }

  [[nodiscard]] std::size_t valid_count() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
  }

  /// Same geometry, nothing masked in.
  [[nodiscard]] ScalarField2D empty_like() const { return {x0, y0, spacing, nx, ny}; }
};

/// Fill a grid from an explicit function; used for synthetic and calibration fields.
inline ScalarField2D sample_field(const std::function<double(double, double)>& u, double x0, double y0, double h,
                                  int nx, int ny) {
  ScalarField2D f(x0, y0, h, nx, ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) f.set(i, j, u(f.x(i), f.y(j)));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Inversion of f
// ---------------------------------------------------------------------------

struct InversionOptions {
  int max_iterations = 50;
  double relative_tolerance = 1e-12;
};

struct InversionResult {
  HalfPlanePoint zeta{};
  double residual = std::numeric_limits<double>::infinity();  // |f(zeta) - target|
  int iterations = 0;
  bool converged = false;
};

namespace detail {

struct MapJet {
  Complex f;
  Complex f_sigma;
  Complex f_tau;
};

/// f and its real partials, allowed slightly outside the closed half-plane
/// (wherever h and g still evaluate) so that Newton can step across sigma = 0.
inline MapJet map_jet(const WeierstrassPair& pair, Complex z) {
  const HalfPlanePoint p = HalfPlanePoint::from_complex(z);
  const Jet2 h = pair.h()(p);
  if (!(std::abs(h.d1) >= kDerivativeFloor)) throw SingularityError("map_jet: h' below floor");
  const Complex gp = -pair.k() / h.d1;
  Complex g;
  if (const auto* closed = std::get_if<AnalyticMap>(&pair.g())) {
    g = (*closed)(p).v;
  } else {
    if (!p.is_admissible()) throw DomainError("map_jet: numeric g needs sigma >= 0");
    g = g_value(pair, p);
  }
  const Complex i{0.0, 1.0};
  return {h.v + std::conj(g), h.d1 + std::conj(gp), i * (h.d1 - std::conj(gp))};
}

}  // namespace detail

/// Newton iteration on the real 2x2 system f(sigma, tau) = target with the
/// exact Jacobian from h' and g'. Steps that fail to reduce the residual are
/// halved. Never throws for evaluation failures; inspect `converged`.
inline InversionResult newton_invert(const WeierstrassPair& pair, Complex target, HalfPlanePoint initial,
                                     const InversionOptions& opts = {}) {
  InversionResult out;
  Complex z = initial.as_complex();
  const double tol = opts.relative_tolerance * (1.0 + std::abs(target));
  detail::MapJet m;
  try {
    m = detail::map_jet(pair, z);
  } catch (const Error&) {
    out.zeta = initial;
    return out;
  }
  double res = std::abs(m.f - target);
  for (int it = 0; it < opts.max_iterations && res > tol; ++it) {
    const Complex r = target - m.f;
    const double a = m.f_sigma.real();
    const double b = m.f_tau.real();
    const double c = m.f_sigma.imag();
    const double d = m.f_tau.imag();
    const double det = a * d - b * c;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) break;
    const Complex step{(d * r.real() - b * r.imag()) / det, (a * r.imag() - c * r.real()) / det};
    double lambda = 1.0;
    bool accepted = false;
    for (int half = 0; half < 30; ++half, lambda *= 0.5) {
      const Complex trial = z + lambda * step;
      try {
        const detail::MapJet mt = detail::map_jet(pair, trial);
        const double rt = std::abs(mt.f - target);
        if (std::isfinite(rt) && (rt < res || half == 29)) {
          z = trial;
          m = mt;
          res = rt;
          accepted = true;
          break;
        }
      } catch (const Error&) {
        // outside the region where h evaluates; shorten the step
      }
    }
    out.iterations = it + 1;
    if (!accepted) break;
  }
  out.zeta = HalfPlanePoint::from_complex(z);
  out.residual = res;
  out.converged = res <= tol;
  return out;
}

/// Preimage of `target` in the closed half-plane. Iterates that land within
/// 1e-12 of sigma = 0 on the negative side are snapped to the boundary.
/// Throws ConvergenceError on failure or when the solution lies outside
/// sigma >= 0 (the message reports the best iterate).
inline HalfPlanePoint invert_f(const WeierstrassPair& pair, Complex target, HalfPlanePoint initial,
                               const InversionOptions& opts = {}) {
  InversionResult r = newton_invert(pair, target, initial, opts);
  if (r.converged && r.zeta.sigma < 0.0 && r.zeta.sigma > -1e-12) r.zeta.sigma = 0.0;
  if (!r.converged || r.zeta.sigma < 0.0) {
    std::ostringstream msg;
    msg << "invert_f: " << (r.converged ? "solution outside sigma >= 0" : "no convergence") << " for target ("
        << target.real() << ", " << target.imag() << "); best iterate (" << r.zeta.sigma << ", " << r.zeta.tau
        << "), residual " << r.residual << " after " << r.iterations << " iterations";
    throw ConvergenceError(msg.str());
  }
  return r.zeta;
}

struct Window {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
};

struct Reconstruction {
  ScalarField2D field;
  std::vector<HalfPlanePoint> preimages;  // per node; NaN where masked out
  std::size_t failed_inversions = 0;      // Newton did not converge
  std::size_t outside_domain = 0;         // sigma < 0, or no preimage and beyond the boundary image
};

namespace detail {

/// Images of a coarse zeta-lattice, used to seed Newton far from any solved node.
struct SeedLattice {
  std::vector<HalfPlanePoint> zeta;
  std::vector<Complex> image;

  SeedLattice(const WeierstrassPair& pair, const Window& w) {
    const double extent = 4.0 + 2.0 * std::max({std::abs(w.x_min), std::abs(w.x_max), std::abs(w.y_min),
                                                std::abs(w.y_max)});
    const int n_sigma = 60;
    const int n_tau = 121;
    for (int a = 0; a < n_sigma; ++a) {
      const double t = static_cast<double>(a) / (n_sigma - 1);
      const double s = extent * t * t;
      for (int b = 0; b < n_tau; ++b) {
        const double u = -1.0 + 2.0 * b / (n_tau - 1);
        const double tau = extent * u * std::abs(u);
        try {
          const SurfacePoint p = eval_surface(pair, {s, tau});
          zeta.push_back({s, tau});
          image.emplace_back(p.x, p.y);
        } catch (const Error&) {
        }
      }
    }
  }

  [[nodiscard]] std::optional<HalfPlanePoint> nearest(Complex target) const {
    if (zeta.empty()) return std::nullopt;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < image.size(); ++i) {
      const double d = std::norm(image[i] - target);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return zeta[best];
  }
};

/// Side test against the boundary image f(i tau). Valid while y increases
/// along the boundary; returns nullopt when that fails or no crossing is found.
/// True means the target lies on the same side as f(1, 0).
struct BoundarySide {
  const WeierstrassPair& pair;
  std::optional<double> reference;

  explicit BoundarySide(const WeierstrassPair& p) : pair(p) {
    try {
      const SurfacePoint r = eval_surface(pair, {1.0, 0.0});
      if (const auto xb = boundary_x(r.y)) reference = r.x - *xb;
    } catch (const Error&) {
    }
    if (reference && *reference == 0.0) reference.reset();
  }

  [[nodiscard]] std::optional<double> boundary_x(double y) const {
    auto y_at = [&](double t) { return eval_surface(pair, {0.0, t}).y; };
    double lo = -1.0, hi = 1.0;
    while (y_at(lo) > y && lo > -1e6) lo *= 2.0;
    while (y_at(hi) < y && hi < 1e6) hi *= 2.0;
    if (y_at(lo) > y || y_at(hi) < y) return std::nullopt;
    for (int k = 0; k < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++k) {
      const double mid = 0.5 * (lo + hi);
      if (y_at(mid) < y) lo = mid;
      else hi = mid;
    }
    return eval_surface(pair, {0.0, 0.5 * (lo + hi)}).x;
  }

  [[nodiscard]] std::optional<bool> inside(Complex target) const {
    if (!reference) return std::nullopt;
    try {
      const auto xb = boundary_x(target.imag());
      if (!xb) return std::nullopt;
      return (target.real() - *xb) * *reference > 0.0;
    } catch (const Error&) {
      return std::nullopt;
    }
  }
};

}  // namespace detail

/// Pull u = k0 * sigma back to a grid over `window` with the given spacing.
///
/// Marching: the middle column is solved first, seeded from the lattice and
/// then from its vertical neighbour; every other node is seeded from its
/// solved horizontal neighbour, falling back to the lattice. Nodes whose
/// preimage has sigma < 0, or that fail to invert and sit beyond the boundary
/// image f(i tau), lie outside D and stay masked out.
/// Throws Error if no node of the window can be inverted.
inline Reconstruction reconstruct_u(const WeierstrassPair& pair, const Window& window, double spacing,
                                    const InversionOptions& opts = {}) {
  if (!(spacing > 0.0) || !(window.x_max > window.x_min) || !(window.y_max > window.y_min)) {
    throw ParameterError("reconstruct_u: invalid window or spacing");
  }
  const int nx = static_cast<int>(std::floor((window.x_max - window.x_min) / spacing + 1e-9)) + 1;
  const int ny = static_cast<int>(std::floor((window.y_max - window.y_min) / spacing + 1e-9)) + 1;
  Reconstruction rec{ScalarField2D(window.x_min, window.y_min, spacing, nx, ny),
                     std::vector<HalfPlanePoint>(static_cast<std::size_t>(nx) * ny,
                                                 {std::numeric_limits<double>::quiet_NaN(),
                                                  std::numeric_limits<double>::quiet_NaN()}),
                     0, 0};
  ScalarField2D& field = rec.field;
  const detail::SeedLattice lattice(pair, window);
  const detail::BoundarySide side(pair);
  std::vector<std::uint8_t> attempted(field.values.size(), 0);

  auto solve = [&](int i, int j, std::optional<HalfPlanePoint> seed) {
    const std::size_t idx = field.index(i, j);
    const Complex target{field.x(i), field.y(j)};
    InversionResult r;
    if (seed) r = newton_invert(pair, target, *seed, opts);
    if (!r.converged) {
      if (const auto fallback = lattice.nearest(target)) r = newton_invert(pair, target, *fallback, opts);
    }
    attempted[idx] = 1;
    if (!r.converged) {
      if (side.inside(target) == std::optional<bool>(false)) ++rec.outside_domain;
      else ++rec.failed_inversions;
      return;
    }
    if (r.zeta.sigma < 0.0 && r.zeta.sigma > -1e-12) r.zeta.sigma = 0.0;
    if (r.zeta.sigma < 0.0) {
      ++rec.outside_domain;
      return;
    }
    rec.preimages[idx] = r.zeta;
    field.set(i, j, pair.k0() * r.zeta.sigma);
  };
  auto solved_seed = [&](int i, int j) -> std::optional<HalfPlanePoint> {
    if (field.valid(i, j)) return rec.preimages[field.index(i, j)];
    return std::nullopt;
  };

  const int mid = nx / 2;
  for (int j = 0; j < ny; ++j) solve(mid, j, j > 0 ? solved_seed(mid, j - 1) : std::nullopt);
  for (int i = mid + 1; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      auto seed = solved_seed(i - 1, j);
      if (!seed) seed = solved_seed(i, j - 1);
      solve(i, j, seed);
    }
  }
  for (int i = mid - 1; i >= 0; --i) {
    for (int j = 0; j < ny; ++j) {
      auto seed = solved_seed(i + 1, j);
      if (!seed) seed = solved_seed(i, j - 1);
      solve(i, j, seed);
    }
  }
  if (field.valid_count() == 0) {
    std::ostringstream msg;
    msg << "reconstruct_u: no node of the window [" << window.x_min << ", " << window.x_max << "] x ["
        << window.y_min << ", " << window.y_max << "] could be inverted into the half-plane ("
        << rec.outside_domain << " outside the domain, " << rec.failed_inversions << " failed)";
    throw Error(msg.str());
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Stencil operators
// ---------------------------------------------------------------------------

struct ResidualReport {
  double spacing = 0.0;
  double max_abs_residual = 0.0;
  double l2_residual = 0.0;  // sqrt(sum r^2 h^2)
  std::size_t node_count = 0;
  double convergence_order = std::numeric_limits<double>::quiet_NaN();
  double x_at_max = 0.0;
  double y_at_max = 0.0;
};

namespace detail {

struct Derivatives {
  double ux, uy, uxx, uyy, uxy;
};

inline Derivatives centered(const ScalarField2D& f, int i, int j) {
  const double h = f.spacing;
  const double c = f.at(i, j);
  return {(f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * h),
          (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * h),
          (f.at(i + 1, j) - 2.0 * c + f.at(i - 1, j)) / (h * h),
          (f.at(i, j + 1) - 2.0 * c + f.at(i, j - 1)) / (h * h),
          (f.at(i + 1, j + 1) - f.at(i + 1, j - 1) - f.at(i - 1, j + 1) + f.at(i - 1, j - 1)) / (4.0 * h * h)};
}

inline void require_interior(const ScalarField2D& f, const char* what) {
  for (int j = 1; j + 1 < f.ny; ++j) {
    for (int i = 1; i + 1 < f.nx; ++i) {
      if (f.interior(i, j)) return;
    }
  }
  throw Error(std::string(what) + ": field has no interior nodes");
}

template <typename Op>
ScalarField2D map_interior(const ScalarField2D& f, const char* what, Op op) {
  require_interior(f, what);
  ScalarField2D out = f.empty_like();
  for (int j = 1; j + 1 < f.ny; ++j) {
    for (int i = 1; i + 1 < f.nx; ++i) {
      if (!f.interior(i, j)) continue;
      if (const std::optional<double> v = op(i, j)) out.set(i, j, *v);
    }
  }
  return out;
}

}  // namespace detail

/// Residual of div(grad u / sqrt(1 + |grad u|^2)) in flux form: face-normal
/// derivatives by two-point differences, tangential ones averaged from the
/// adjacent centred differences.
inline ResidualReport msr_residual(const ScalarField2D& f) {
  detail::require_interior(f, "msr_residual");
  const double h = f.spacing;
  auto u = [&](int i, int j) { return f.at(i, j); };
  auto flux_x = [&](int i, int j) {  // face (i + 1/2, j)
    const double ux = (u(i + 1, j) - u(i, j)) / h;
    const double uy = (u(i, j + 1) - u(i, j - 1) + u(i + 1, j + 1) - u(i + 1, j - 1)) / (4.0 * h);
    return ux / std::sqrt(1.0 + ux * ux + uy * uy);
  };
  auto flux_y = [&](int i, int j) {  // face (i, j + 1/2)
    const double uy = (u(i, j + 1) - u(i, j)) / h;
    const double ux = (u(i + 1, j) - u(i - 1, j) + u(i + 1, j + 1) - u(i - 1, j + 1)) / (4.0 * h);
    return uy / std::sqrt(1.0 + ux * ux + uy * uy);
  };
  ResidualReport rep;
  rep.spacing = h;
  double sum2 = 0.0;
  for (int j = 1; j + 1 < f.ny; ++j) {
    for (int i = 1; i + 1 < f.nx; ++i) {
      if (!f.interior(i, j)) continue;
      const double r = (flux_x(i, j) - flux_x(i - 1, j)) / h + (flux_y(i, j) - flux_y(i, j - 1)) / h;
      ++rep.node_count;
      sum2 += r * r;
      if (std::abs(r) >= rep.max_abs_residual) {
        rep.max_abs_residual = std::abs(r);
        rep.x_at_max = f.x(i);
        rep.y_at_max = f.y(j);
      }
    }
  }
  rep.l2_residual = std::sqrt(sum2 * h * h);
  return rep;
}

/// Observed order log2(max_coarse / max_fine) for spacings h and h/2; stored in `fine`.
inline double residual_convergence(const ResidualReport& coarse, ResidualReport& fine) {
  fine.convergence_order = std::log(coarse.max_abs_residual / fine.max_abs_residual) / std::log(coarse.spacing / fine.spacing);
  return fine.convergence_order;
}

inline ScalarField2D F_operator(const ScalarField2D& f) {
  return detail::map_interior(f, "F_operator", [&](int i, int j) -> std::optional<double> {
    const auto d = detail::centered(f, i, j);
    return d.uy * d.uy * d.uxx + d.ux * d.ux * d.uyy - 2.0 * d.ux * d.uy * d.uxy;
  });
}

/// Five-point Laplacian.
inline ScalarField2D laplacian(const ScalarField2D& f) {
  return detail::map_interior(f, "laplacian", [&](int i, int j) -> std::optional<double> {
    const auto d = detail::centered(f, i, j);
    return d.uxx + d.uyy;
  });
}

struct SignSummary {
  std::size_t nodes = 0;
  std::size_t negative = 0;
  double max_value = -std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  [[nodiscard]] bool all_negative() const { return nodes > 0 && negative == nodes; }
};

inline SignSummary sign_summary(const ScalarField2D& f) {
  SignSummary s;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    if (!f.mask[k]) continue;
    ++s.nodes;
    if (f.values[k] < 0.0) ++s.negative;
    s.max_value = std::max(s.max_value, f.values[k]);
    s.max_abs = std::max(s.max_abs, std::abs(f.values[k]));
  }
  return s;
}

inline constexpr double kGradientFloor = 1e-8;

/// F(u - c) / |grad u|^3 at each interior node: the curvature of the level
/// line of u through that node, positive when it bends away from {u > c}.
/// F is shift-invariant, so c only labels the level of interest. Nodes with
/// |grad u| below `gradient_floor` are masked out.
inline ScalarField2D levelset_curvature_field(const ScalarField2D& f, double c, double gradient_floor = kGradientFloor) {
  (void)c;
  return detail::map_interior(f, "levelset_curvature_field", [&](int i, int j) -> std::optional<double> {
    const auto d = detail::centered(f, i, j);
    const double g = std::hypot(d.ux, d.uy);
    if (g < gradient_floor) return std::nullopt;
    const double F = d.uy * d.uy * d.uxx + d.ux * d.ux * d.uyy - 2.0 * d.ux * d.uy * d.uxy;
    return F / (g * g * g);
  });
}

}  // namespace minigraph
