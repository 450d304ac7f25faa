#include <cmath>

#include "support.hpp"

using namespace minigraph;
using mgtest::kSeed;

namespace {

WeierstrassPair numeric_twin(double gamma) {
  const double c = 1.0 / (gamma * (2.0 - gamma));
  return {AnalyticMap("numeric", {PowerTerm{1.0, 1.0, gamma}}), 2.0,
          NumericAntiderivative{{0.0, 0.0}, Complex(-c, 0.0), 1e-12}};
}

}  // namespace

TEST(GPrime, FamilyAtOne) {
  const auto pair = lw_family(1.5);
  const Complex gp = g_prime(pair, {1.0, 0.0});
  EXPECT_COMPLEX_NEAR(gp, Complex(-0.47140452079103168), 1e-15);
  EXPECT_COMPLEX_NEAR(gp, -(1.0 / 1.5) * std::pow(Complex(2.0), 1.0 - 1.5), 1e-15);
  EXPECT_COMPLEX_NEAR(gp, std::get<AnalyticMap>(pair.g())({1.0, 0.0}).d1, 1e-15);
}

TEST(GPrime, PlanarIsConstant) {
  const auto pair = planar_pair(2.0, 2.0);
  for (const HalfPlanePoint z : {HalfPlanePoint{1.0, 0.0}, HalfPlanePoint{0.0, -4.0}, HalfPlanePoint{9.0, 2.0}}) {
    EXPECT_EQ(g_prime(pair, z), Complex(-0.5));
  }
}

TEST(GPrime, FamilyNineTenthsAtI) {
  const auto pair = lw_family(1.9);
  const Complex gp = g_prime(pair, {0.0, 1.0});
  EXPECT_COMPLEX_NEAR(gp, Complex(-0.29297355193334911, 0.25022305205790134), 1e-15);
  EXPECT_NEAR(std::abs(gp) * std::abs(pair.h()({0.0, 1.0}).d1), pair.k(), 1e-12);
}

TEST(EvalSurface, FamilyAtOne) {
  const auto pair = lw_family(1.5);
  EXPECT_NEAR(g_value(pair, {1.0, 0.0}).real(), -1.8856180831641267, 1e-15);
  const SurfacePoint p = eval_surface(pair, {1.0, 0.0});
  EXPECT_NEAR(p.x, 0.94280904158206337, 1e-15);
  EXPECT_EQ(p.y, 0.0);
  EXPECT_EQ(p.u, 2.0);
}

TEST(EvalSurface, PlanarLinear) {
  const SurfacePoint p = eval_surface(planar_pair(2.0, 2.0), {1.0, 1.0});
  EXPECT_DOUBLE_EQ(p.x, 1.5);
  EXPECT_DOUBLE_EQ(p.y, 2.5);
  EXPECT_EQ(p.u, 2.0);
}

TEST(EvalSurface, FamilyBoundaryPoint) {
  const SurfacePoint p = eval_surface(lw_family(1.5), {0.0, 1.0});
  const Complex w{1.0, 1.0};
  EXPECT_NEAR(p.x, std::pow(w, 1.5).real() - (4.0 / 3.0) * std::pow(w, 0.5).real(), 1e-14);
  EXPECT_NEAR(p.x, -0.82131789838483066, 1e-14);
  EXPECT_NEAR(p.y, 2.1605604547796738, 1e-14);
  EXPECT_EQ(p.u, 0.0);
}

TEST(EvalSurface, RejectsLeftHalfPlane) {
  EXPECT_THROW(eval_surface(lw_family(1.5), {-0.1, 0.0}), DomainError);
}

TEST(EvalSurface, NumericCompanionMatchesClosedForm) {
  for (double gamma : {1.2, 1.5, 1.8}) {
    const auto closed = lw_family(gamma);
    const auto numeric = numeric_twin(gamma);
    EXPECT_FALSE(numeric.has_closed_form_g());
    for (const HalfPlanePoint z : {HalfPlanePoint{1.0, 0.0}, HalfPlanePoint{0.0, 3.0}, HalfPlanePoint{2.5, -4.0}}) {
      const SurfacePoint a = eval_surface(closed, z);
      const SurfacePoint b = eval_surface(numeric, z);
      EXPECT_NEAR(a.x, b.x, 1e-9);
      EXPECT_NEAR(a.y, b.y, 1e-9);
      EXPECT_EQ(a.u, b.u);
    }
  }
}

TEST(HeightViaIntegral, Examples) {
  EXPECT_EQ(height_via_integral(lw_family(1.5), {0.0, 4.0}), 0.0);
  EXPECT_EQ(height_via_integral(planar_pair(3.0, 2.0), {0.0, -1.0}), 0.0);
  EXPECT_NEAR(height_via_integral(lw_family(1.5), {1.0, 0.0}), 2.0, 1e-10);
  EXPECT_NEAR(height_via_integral(planar_pair(2.0, 2.0), {3.0, 5.0}), 6.0, 1e-10);
}

TEST(LwFamily, GammaOnePointFive) {
  const auto pair = lw_family(1.5);
  EXPECT_EQ(pair.k0(), 2.0);
  EXPECT_EQ(pair.k(), 1.0);
  EXPECT_EQ(pair.family_gamma().value(), 1.5);
  EXPECT_NEAR(pair.h()({0.0, 0.0}).d1.real(), 1.5, 1e-15);
  EXPECT_NEAR(g_prime(pair, {0.0, 0.0}).real(), -2.0 / 3.0, 1e-15);
  EXPECT_GT(dilatation_margin(pair, {0.0, 0.0}), 0.0);
}

TEST(LwFamily, EndpointsNeedOverride) {
  EXPECT_THROW(lw_family(1.0), ParameterError);
  EXPECT_THROW(lw_family(2.0), ParameterError);
  EXPECT_THROW(lw_family(0.5, true), ParameterError);
  const auto one = lw_family(1.0, true);
  const HalfPlanePoint z{0.4, -2.0};
  EXPECT_COMPLEX_NEAR(one.h()(z).v, z.as_complex() + 1.0, 1e-15);
  EXPECT_COMPLEX_NEAR(g_value(one, z), -(z.as_complex() + 1.0), 1e-15);
  EXPECT_NEAR(std::abs(one.h()(z).d1), std::abs(g_prime(one, z)), 1e-15);
  EXPECT_NEAR(jacobian_det(one, z), 0.0, 1e-15);
  const auto two = lw_family(2.0, true);
  EXPECT_COMPLEX_NEAR(g_prime(two, z), -1.0 / (2.0 * (z.as_complex() + 1.0)), 1e-15);
}

TEST(LwFamily, LogDerivativeClosedForm) {
  const auto pair = lw_family(1.9);
  EXPECT_EQ(pair.k0(), 2.0);
  std::mt19937 rng(kSeed);
  for (const auto& z : mgtest::random_points(rng, 50)) {
    EXPECT_NEAR(log_derivative(pair.h()(z)).real(), 0.9 * (1.0 / (z.as_complex() + 1.0)).real(), 1e-14);
  }
  EXPECT_NEAR(log_derivative(pair.h()({2.0, 3.0})).real(), 0.15, 1e-15);
}

TEST(PlanarPair, Examples) {
  const auto pair = planar_pair(2.0, 2.0);
  const SurfacePoint p = eval_surface(pair, {0.8, -1.2});
  EXPECT_NEAR(p.x, 1.5 * 0.8, 1e-15);
  EXPECT_NEAR(p.y, 2.5 * -1.2, 1e-15);
  EXPECT_NEAR(p.u, (4.0 / 3.0) * p.x, 1e-15);
  const SurfacePoint q = eval_surface(planar_pair(3.0, 2.0), {1.0, 0.0});
  EXPECT_NEAR(q.x, 8.0 / 3.0, 1e-15);
  EXPECT_EQ(q.y, 0.0);
  EXPECT_EQ(q.u, 2.0);
  EXPECT_THROW(planar_pair(1.0, 2.0), ParameterError);
  EXPECT_THROW(planar_pair(0.5, 2.0), ParameterError);
  double prev = jacobian_det(planar_pair(1.1, 2.0), {1.0, 0.0});
  for (double delta : {1e-2, 1e-4, 1e-6}) {
    const double j = jacobian_det(planar_pair(1.0 + delta, 2.0), {1.0, 0.0});
    EXPECT_GT(j, 0.0);
    EXPECT_LT(j, prev);
    prev = j;
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(WeierstrassPair, KMustMatch) {
  const AnalyticMap h("h", {AffineTerm{2.0, 0.0}});
  EXPECT_NO_THROW(WeierstrassPair(h, 2.0, 1.0, AnalyticMap("g", {AffineTerm{-0.5, 0.0}})));
  EXPECT_THROW(WeierstrassPair(h, 2.0, 1.1, AnalyticMap("g", {AffineTerm{-0.5, 0.0}})), ParameterError);
  EXPECT_THROW(WeierstrassPair(h, 0.0, AnalyticMap("g", {AffineTerm{-0.5, 0.0}})), ParameterError);
  EXPECT_THROW(WeierstrassPair(h, 2.0, NumericAntiderivative{{-1.0, 0.0}, 0.0}), ParameterError);
}

TEST(ScaleSolution, Examples) {
  const auto pair = lw_family(1.5);
  const auto same = scale_solution(pair, 1.0);
  const SurfacePoint a = eval_surface(pair, {0.3, 2.0});
  const SurfacePoint b = eval_surface(same, {0.3, 2.0});
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.u, b.u);

  const auto doubled = scale_solution(pair, 2.0);
  EXPECT_EQ(doubled.k0(), 4.0);
  EXPECT_EQ(doubled.k(), 4.0);
  const SurfacePoint d = eval_surface(doubled, {1.0, 0.0});
  EXPECT_NEAR(d.x, 1.8856180831641267, 1e-14);
  EXPECT_EQ(d.u, 4.0);
  EXPECT_NEAR(curvature_closed_form(doubled, {1.0, 0.0}), 0.048211825989991877, 1e-15);
  EXPECT_THROW(scale_solution(pair, 0.0), ParameterError);
  EXPECT_THROW(scale_solution(pair, -1.0), ParameterError);
}

TEST(JacobianDet, Examples) {
  EXPECT_NEAR(jacobian_det(lw_family(1.5), {1.0, 0.0}), 4.2777777777777778, 1e-14);
  std::mt19937 rng(kSeed);
  for (const auto& z : mgtest::random_points(rng, 20)) EXPECT_NEAR(jacobian_det(planar_pair(2.0, 2.0), z), 3.75, 1e-14);
}

TEST(WeierstrassProperty, DilatationIdentity) {
  std::mt19937 rng(kSeed);
  for (const auto& pair : mgtest::catalog_pairs()) {
    for (const auto& z : mgtest::random_points(rng, 200, 0.0, 10.0)) {
      const double prod = std::abs(g_prime(pair, z)) * std::abs(pair.h()(z).d1);
      EXPECT_LE(std::abs(prod - pair.k()), 1e-12 * pair.k());
      EXPECT_GT(std::abs(pair.h()(z).d1), std::abs(g_prime(pair, z)));
    }
  }
}

TEST(WeierstrassProperty, HeightConsistencyOnGrid) {
  for (const auto& pair : {lw_family(1.5), lw_family(1.9), planar_pair(2.0, 2.0), numeric_twin(1.3)}) {
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const HalfPlanePoint z{0.25 * i, -5.0 + 10.0 * j / 19.0};
        EXPECT_NEAR(height_via_integral(pair, z), pair.k0() * z.sigma, 1e-10 * (1.0 + pair.k0() * z.sigma));
      }
    }
  }
}

TEST(WeierstrassProperty, DerivativeLowerBound) {
  std::mt19937 rng(kSeed);
  for (const auto& pair : mgtest::catalog_pairs()) {
    double worst = INFINITY;
    for (const auto& z : mgtest::random_points(rng, 500, 0.0, 20.0, -20.0, 20.0)) {
      worst = std::min(worst, std::abs(pair.h()(z).d1) - std::sqrt(pair.k()));
    }
    EXPECT_GT(worst, 0.0) << pair.name();
    if (const auto g = pair.family_gamma()) { EXPECT_GE(worst + 1.0, *g - 1e-12); }
  }
}

TEST(WeierstrassProperty, BoundaryHeightIsZero) {
  std::mt19937 rng(kSeed);
  std::uniform_real_distribution<double> t(-100.0, 100.0);
  for (const auto& pair : mgtest::catalog_pairs()) {
    for (int n = 0; n < 50; ++n) EXPECT_EQ(eval_surface(pair, {0.0, t(rng)}).u, 0.0);
  }
}

TEST(WeierstrassProperty, ScalingIsComponentwise) {
  std::mt19937 rng(kSeed);
  for (const auto& pair : {lw_family(1.5), lw_family(1.2), planar_pair(2.0, 2.0), numeric_twin(1.6)}) {
    for (double c : {0.5, 2.0, 10.0}) {
      const auto scaled = scale_solution(pair, c);
      for (const auto& z : mgtest::random_points(rng, 30, 0.0, 10.0)) {
        const SurfacePoint a = eval_surface(pair, z);
        const SurfacePoint b = eval_surface(scaled, z);
        const double tol = 1e-12 * std::max(1.0, c * std::hypot(a.x, a.y));
        EXPECT_NEAR(b.x, c * a.x, tol);
        EXPECT_NEAR(b.y, c * a.y, tol);
        EXPECT_NEAR(b.u, c * a.u, 1e-12 * std::max(1.0, c * a.u));
        EXPECT_COMPLEX_NEAR(g_prime(scaled, z), c * g_prime(pair, z), 1e-12 * std::max(1.0, c));
      }
    }
  }
}
