#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wavesym/fibers.hpp"

using namespace wavesym;

namespace {

SpacetimeRegion cylinder(double lo, double hi) {
  return SpacetimeRegion(kTwoPi, make_node(Cylinder{{0, kTwoPi}, {{lo, hi}}}));
}

}  // namespace

TEST(Fibers, FullSquare) {
  const auto f = fiber_profiles(rasterize(cylinder(0, kTwoPi), 32, 1));
  for (int k = 0; k < 32; ++k) {
    EXPECT_NEAR(f.m_plus[k], kTwoPi, 1e-12);
    EXPECT_NEAR(f.m_minus[k], kTwoPi, 1e-12);
  }
  const auto g = check_gcc(f);
  EXPECT_TRUE(g.holds);
  EXPECT_TRUE(g.weak_holds);
  EXPECT_NEAR(g.c0_est, kTwoPi, 1e-12);
  EXPECT_NEAR(g.c0_line_est, std::sqrt(2.0) * kTwoPi, 1e-12);
}

TEST(Fibers, CylinderEveryLineSeesArcLength) {
  const int n = 64;
  const double l = 16 * kTwoPi / n;
  const auto g = cylinder(1 * kTwoPi / n, 17 * kTwoPi / n);
  const auto f = fiber_profiles(rasterize(g, n, 2));
  for (int k = 0; k < n; ++k) {
    EXPECT_NEAR(f.m_plus[k], l, 1e-9);
    EXPECT_NEAR(f.m_minus[k], l, 1e-9);
  }
  // Direct line integrals agree.
  for (int k = 0; k < n; k += 7) {
    const double x0 = (k + 0.5) * kTwoPi / n;
    EXPECT_NEAR(oracle::line_measure(g, x0, 1, kTwoPi, 4096), f.m_plus[k], 2 * kTwoPi / n);
    EXPECT_NEAR(oracle::line_measure(g, x0, -1, kTwoPi, 4096), f.m_minus[k], 2 * kTwoPi / n);
  }
}

TEST(Fibers, Figure1MinimumFiber) {
  const int n = 256;
  const auto f = fiber_profiles(rasterize(figure1_region().region, n, 4));
  const double dx = kTwoPi / n;
  EXPECT_NEAR(*std::min_element(f.m_plus.begin(), f.m_plus.end()), kPi, 2 * dx);
  EXPECT_NEAR(*std::min_element(f.m_minus.begin(), f.m_minus.end()), kPi, 2 * dx);
}

TEST(Fibers, BandAloneFailsWeakGcc) {
  // G = L_{eta in (0,pi)}: eta-lines off the band never meet G.
  const SpacetimeRegion g(kTwoPi, make_node(CharBand{CharFamily::kEta, {{0, kPi}}}));
  const auto f = fiber_profiles(rasterize(g, 64, 2));
  const auto r = check_gcc(f);
  EXPECT_FALSE(r.weak_holds);
  EXPECT_FALSE(r.holds);
  EXPECT_FALSE(r.zero_eta.empty());
  EXPECT_TRUE(r.zero_xi.empty());
  for (double m : f.m_minus) EXPECT_GT(m, 0.0);
}

TEST(Fibers, Figure2SatisfiesGcc) {
  const auto r = check_gcc(fiber_profiles(rasterize(figure2_region().region, 128, 4)));
  EXPECT_TRUE(r.holds);
  EXPECT_GT(r.c0_est, 0.0);
}

TEST(Fibers, MassBalance) {
  for (const auto& g : {figure1_region().region, figure2_region().region, cylinder(0.3, 2.9)}) {
    const auto m = rasterize(g, 96, 3);
    const auto f = fiber_profiles(m);
    double sp = 0, sm = 0;
    for (int k = 0; k < 96; ++k) {
      sp += f.m_plus[k];
      sm += f.m_minus[k];
    }
    const double dx = kTwoPi / 96;
    EXPECT_NEAR(sp * dx, m.measure(), 1e-10 * m.measure());
    EXPECT_NEAR(sm * dx, m.measure(), 1e-10 * m.measure());
    EXPECT_NEAR(f.measure(), m.measure(), 1e-10 * m.measure());
    // Row and column sums of mu.
    for (int p = 0; p < 96; ++p) {
      double row = 0;
      for (int q = 0; q < 96; ++q) row += f.mu_at(p, q);
      EXPECT_NEAR(row, f.m_minus[p], 1e-12);
    }
  }
}

TEST(Fibers, ShiftEquivariance) {
  const auto m = rasterize(figure2_region().region, 64, 2);
  const auto f = fiber_profiles(m);
  const auto g = fiber_profiles(m.shifted_x(5));
  for (int k = 0; k < 64; ++k) {
    EXPECT_NEAR(g.m_plus[wrap(k + 5, 64)], f.m_plus[k], 1e-12);
    EXPECT_NEAR(g.m_minus[wrap(k + 5, 64)], f.m_minus[k], 1e-12);
  }
  EXPECT_NEAR(check_gcc(g).c0_est, check_gcc(f).c0_est, 1e-12);
}

TEST(Fibers, TruncationNeverIncreases) {
  const auto m = rasterize(figure1_region().region, 64, 2);
  const auto f = fiber_profiles(m);
  for (int keep : {10, 32, 50}) {
    const auto g = fiber_profiles(m.truncated(keep));
    for (int k = 0; k < 64; ++k) {
      EXPECT_LE(g.m_plus[k], f.m_plus[k] + 1e-15);
      EXPECT_LE(g.m_minus[k], f.m_minus[k] + 1e-15);
    }
  }
}

TEST(Fibers, TransportConstant) {
  EXPECT_NEAR(transport_obs_constant(fiber_profiles(rasterize(cylinder(0, kTwoPi), 32, 1)), 1), kTwoPi, 1e-12);
  const auto f = fiber_profiles(rasterize(cylinder(0, kPi), 64, 2));
  EXPECT_NEAR(transport_obs_constant(f, 1), kPi, 1e-9);
  EXPECT_NEAR(transport_obs_constant(f, -1), kPi, 1e-9);
  EXPECT_THROW(transport_obs_constant(f, 0), std::invalid_argument);
}

TEST(Fibers, GccFloorConvention) {
  const Resolution r = Resolution::make(64, kTwoPi);
  EXPECT_DOUBLE_EQ(gcc_floor(r), 2 * r.dt());
  EXPECT_EQ(r.dt(), r.dx);
  EXPECT_LE(std::abs(Resolution::make(64, 3.0).t_eff() - 3.0), r.dt() / 2);
}
