#pragma once

#include <gtest/gtest.h>

#include <complex>
#include <random>
#include <vector>

#include "minigraph/minigraph.hpp"

namespace mgtest {

using minigraph::Complex;
using minigraph::HalfPlanePoint;

inline constexpr unsigned kSeed = 20240611u;

/// Uniform random interior points sigma in [smin, smax], tau in [tmin, tmax].
inline std::vector<HalfPlanePoint> random_points(std::mt19937& rng, int n, double smin = 0.05, double smax = 10.0,
                                                 double tmin = -10.0, double tmax = 10.0) {
  std::uniform_real_distribution<double> s(smin, smax);
  std::uniform_real_distribution<double> t(tmin, tmax);
  std::vector<HalfPlanePoint> out;
  for (int i = 0; i < n; ++i) out.push_back({s(rng), t(rng)});
  return out;
}

inline std::vector<minigraph::WeierstrassPair> catalog_pairs() {
  return {minigraph::lw_family(1.1), minigraph::lw_family(1.5), minigraph::lw_family(1.9),
          minigraph::planar_pair(2.0, 2.0), minigraph::planar_pair(3.0, 1.0)};
}

#define EXPECT_COMPLEX_NEAR(a, b, tol)                  \
  do {                                                  \
    const ::minigraph::Complex ca_ = (a);               \
    const ::minigraph::Complex cb_ = (b);               \
    EXPECT_LE(std::abs(ca_ - cb_), (tol)) << ca_ << " vs " << cb_; \
  } while (0)

}  // namespace mgtest
