#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"
#include "wavesym/estimator.hpp"

using namespace wavesym;

namespace {

RasterMask cells_mask(int n, const std::function<double(int, int)>& w) {
  const Resolution r = Resolution::make(n, kTwoPi);
  std::vector<double> c(static_cast<size_t>(n) * r.nt);
  for (int i = 0; i < r.nt; ++i) {
    for (int j = 0; j < n; ++j) c[static_cast<size_t>(i) * n + j] = w(i, j);
  }
  return RasterMask::from_cells(r, c);
}

RasterMask full_mask(int n) {
  return cells_mask(n, [](int, int) { return 1.0; });
}

// Columns lo <= j < hi for all t.
RasterMask cylinder_mask(int n, int lo, int hi) {
  return cells_mask(n, [=](int, int j) { return (j >= lo && j < hi) ? 1.0 : 0.0; });
}

double lambda(const RasterMask& m, int modes) { return estimate_observability(m, {modes}).lambda_min; }

}  // namespace

TEST(IndicatorFourier, FullSquare) {
  const auto s = indicator_fourier(full_mask(32), 8);
  EXPECT_NEAR(std::abs(s.coefficient(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s.integral(0, 0)), 4 * kPi * kPi, 1e-10);
  for (int a = -8; a <= 8; ++a) {
    for (int b = -8; b <= 8; ++b) {
      if (a || b) EXPECT_LT(std::abs(s.integral(a, b)), 1e-10);
    }
  }
  EXPECT_THROW(indicator_fourier(full_mask(32), 17), std::invalid_argument);
}

TEST(IndicatorFourier, Figure1Mean) {
  const auto s = indicator_fourier(rasterize(figure1_region().region, 64, 2), 4);
  EXPECT_NEAR(s.coefficient(0, 0).real(), 0.5, 5e-3);
}

TEST(IndicatorFourier, ProductSeparates) {
  const int n = 32;
  auto e = [](int i) { return i < 10 ? 1.0 : 0.0; };
  auto f = [](int j) { return (j % 5 == 0) ? 1.0 : 0.0; };
  const auto s = indicator_fourier(cells_mask(n, [&](int i, int j) { return e(i) * f(j); }), 6);
  const auto se = indicator_fourier(cells_mask(n, [&](int i, int) { return e(i); }), 6);
  const auto sf = indicator_fourier(cells_mask(n, [&](int, int j) { return f(j); }), 6);
  for (int a = -6; a <= 6; ++a) {
    for (int b = -6; b <= 6; ++b) {
      // J_e(a, 0) J_f(0, b) / |square| = J(a, b).
      const auto expect = se.integral(a, 0) * sf.integral(0, b) / (4 * kPi * kPi);
      EXPECT_LT(std::abs(s.integral(a, b) - expect), 1e-10);
    }
  }
}

TEST(IndicatorFourier, HermitianAndParseval) {
  const auto m = rasterize(figure2_region().region, 32, 2);
  const auto s = indicator_fourier(m, 16);
  double sum = 0.0;
  for (int a = -16; a <= 16; ++a) {
    for (int b = -16; b <= 16; ++b) {
      EXPECT_LT(std::abs(s.integral(-a, -b) - std::conj(s.integral(a, b))), 1e-10);
      sum += std::norm(s.integral(a, b));
    }
  }
  EXPECT_LE(sum / (4 * kPi * kPi), s.l2_squared * (1 + 1e-12));
  EXPECT_GT(sum / (4 * kPi * kPi), 0.8 * s.l2_squared);
}

TEST(Gram, HermitianAndDims) {
  const auto g = gram_matrix(indicator_fourier(rasterize(figure1_region().region, 32, 2), 8), 4);
  ASSERT_EQ(g.dim(), 17);
  for (int r = 0; r < g.dim(); ++r) {
    for (int c = 0; c < g.dim(); ++c) EXPECT_LT(std::abs(g.at(r, c) - std::conj(g.at(c, r))), 1e-12);
  }
  EXPECT_EQ(g.p_index(-4), 0);
  EXPECT_EQ(g.p_index(1), 4);
  EXPECT_EQ(g.q_index(-4), 8);
  EXPECT_EQ(g.b0_index(), 16);
  EXPECT_THROW(gram_matrix(indicator_fourier(full_mask(32), 6), 4), std::invalid_argument);
}

TEST(Gram, CoordinatesRoundTrip) {
  std::mt19937_64 rng(1);
  const auto d = oracle::random_spectral(5, rng);
  const auto back = from_coordinates(to_coordinates(d), 5);
  for (int k = -5; k <= 5; ++k) {
    EXPECT_LT(std::abs(back.b_at(k) - d.b_at(k)), 1e-12);
    if (k) EXPECT_LT(std::abs(back.a_at(k) - d.a_at(k)), 1e-12);
  }
}

TEST(Gram, FullSquarePlancherel) {
  std::mt19937_64 rng(2);
  const auto g = gram_matrix(indicator_fourier(full_mask(64), 16), 8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = oracle::random_spectral(8, rng);
    EXPECT_NEAR(quadratic_form(g, to_coordinates(d)), oracle::plancherel_full_square(d),
                1e-10 * oracle::plancherel_full_square(d));
  }
  // u0 = cos x: the observed energy is pi^2.
  SpectralData c(8);
  c.a_at(1) = c.a_at(-1) = 0.5;
  EXPECT_NEAR(quadratic_form(g, to_coordinates(c)), kPi * kPi, 1e-10);
}

TEST(Gram, MatchesDirectQuadrature) {
  std::mt19937_64 rng(3);
  for (const auto& region : {figure1_region().region, figure2_region().region}) {
    const auto m = rasterize(region, 64, 2);
    const auto g = gram_matrix(indicator_fourier(m, 12), 6);
    for (int trial = 0; trial < 3; ++trial) {
      const auto d = oracle::random_spectral(6, rng);
      const double direct = direct_observed_energy(d, m);
      EXPECT_NEAR(quadratic_form(g, to_coordinates(d)), direct, 1e-9 * d.energy());
    }
  }
}

TEST(Estimator, FullSquareLambdaIsPi) {
  const auto r = estimate_observability(full_mask(64), {4, 8, 16});
  ASSERT_EQ(r.trace.size(), 3u);
  for (const auto& [N, l] : r.trace) EXPECT_NEAR(l, kPi, 1e-9) << N;
}

TEST(Estimator, EmptyMaskLambdaZero) {
  const auto r = estimate_observability(cells_mask(32, [](int, int) { return 0.0; }), {4});
  EXPECT_EQ(r.lambda_min, 0.0);
  EXPECT_GE(r.lambda_raw, -1e-12);
}

TEST(Estimator, NonincreasingInModes) {
  const auto m = rasterize(figure2_region().region, 64, 2);
  const auto r = estimate_observability(m, {2, 4, 8, 16});
  for (size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k].second, r.trace[k - 1].second + 1e-12);
}

TEST(Estimator, MonotoneInRegion) {
  const auto small = cylinder_mask(64, 0, 16), big = cylinder_mask(64, 0, 24);
  EXPECT_LE(lambda(small, 8), lambda(big, 8) + 1e-12);
  EXPECT_LE(lambda(big, 8), lambda(full_mask(64), 8) + 1e-12);
}

TEST(Estimator, RotationInvariant) {
  const auto m = rasterize(figure2_region().region, 64, 2);
  const double l = lambda(m, 8);
  for (int k : {3, 17}) EXPECT_NEAR(lambda(m.shifted_x(k), 8), l, 1e-9);
}

TEST(Estimator, CylinderStableInModes) {
  // Arc of length pi over a full period: observable, constant stays away from 0.
  const auto r = estimate_observability(cylinder_mask(128, 0, 64), {8, 16, 32});
  const double last = r.trace.back().second;
  EXPECT_GT(last, 0.1);
  for (const auto& [N, l] : r.trace) EXPECT_NEAR(l, last, 0.1 * last) << N;
}

TEST(Estimator, Figure1DecaysWithModes) {
  const auto r = estimate_observability(rasterize(figure1_region().region, 128, 2), {4, 8, 16});
  EXPECT_LT(r.trace.back().second, 0.2);
  EXPECT_LT(r.trace.back().second, r.trace.front().second);
}

TEST(Estimator, ArgminIsRealAndAttains) {
  const auto m = rasterize(figure1_region().region, 64, 2);
  const auto g = gram_matrix(indicator_fourier(m, 16), 8);
  const auto r = min_rayleigh(g);
  EXPECT_TRUE(r.argmin.is_real(1e-9));
  EXPECT_NEAR(quadratic_form(g, to_coordinates(r.argmin)) / r.argmin.energy(), r.lambda_min, 1e-9);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = oracle::random_spectral(8, rng);
    EXPECT_GE(quadratic_form(g, to_coordinates(d)) / d.energy(), r.lambda_min - 1e-12);
  }
}

TEST(Threshold, TailShrinks) {
  const auto s = indicator_fourier(rasterize(figure2_region().region, 128, 2), 64);
  double prev = 1e9;
  for (int N : {1, 4, 16, 45}) {
    const double t = indicator_tail(s, N);
    EXPECT_LE(t, prev + 1e-12);
    EXPECT_GE(t, 0.0);
    prev = t;
  }
  EXPECT_THROW(indicator_tail(s, 46), std::invalid_argument);
  const auto r = high_freq_threshold(s, 2.0);
  EXPECT_EQ(r.n_max, 45);
  EXPECT_NEAR(r.target, 0.2, 1e-15);
  EXPECT_FALSE(r.trace.empty());
  if (r.reached) EXPECT_LE(r.tail, r.target);
}

TEST(Threshold, FullSquareImmediate) {
  const auto r = high_freq_threshold(indicator_fourier(full_mask(32), 16), kTwoPi);
  EXPECT_TRUE(r.reached);
  EXPECT_EQ(r.n_threshold, 1);
  EXPECT_LT(r.tail, 1e-6);
}

TEST(HighFreq, FullSquareRatioPi) {
  const auto rep = verify_high_freq_inequality(full_mask(64), 4, 10, 1);
  EXPECT_NEAR(rep.worst_ratio, kPi, 1e-9);
  EXPECT_NEAR(rep.subspace_min, kPi, 1e-9);
  EXPECT_EQ(rep.modes, 16);
  EXPECT_THROW(verify_high_freq_inequality(full_mask(64), 16, 1, 1), std::invalid_argument);
}

TEST(HighFreq, WorstTrialAboveSubspaceMin) {
  const auto rep = verify_high_freq_inequality(rasterize(figure2_region().region, 64, 2), 6, 20, 3);
  EXPECT_GE(rep.worst_ratio, rep.subspace_min - 1e-12);
}

TEST(Io, MatrixDump) {
  const auto g = gram_matrix(indicator_fourier(full_mask(32), 4), 2);
  const auto path = std::filesystem::temp_directory_path() / "wavesym_gram.bin";
  write_matrix(path, g);
  EXPECT_EQ(std::filesystem::file_size(path), 4u + static_cast<size_t>(g.dim()) * g.dim() * 16);
}
