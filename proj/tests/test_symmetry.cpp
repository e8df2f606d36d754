#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wavesym/symmetry.hpp"
#include "wavesym/wave.hpp"

using namespace wavesym;

namespace {

FiberData fibers_of(const SpacetimeRegion& g, int n, int s = 2) { return fiber_profiles(rasterize(g, n, s)); }

SpacetimeRegion full_square() { return SpacetimeRegion(kTwoPi, make_node(Cylinder{{0, kTwoPi}, {{0, kTwoPi}}})); }

// Two diagonal blocks in characteristic coordinates.
SpacetimeRegion diagonal_blocks(double split) {
  auto block = [](Interval a, Interval b) {
    return make_compound(SetOp::kIntersect, {make_node(CharBand{CharFamily::kXi, {a}}),
                                             make_node(CharBand{CharFamily::kEta, {b}})});
  };
  return SpacetimeRegion(kTwoPi, make_compound(SetOp::kUnion, {block({0, split}, {0, split}),
                                                               block({split, kTwoPi}, {split, kTwoPi})}));
}

BinSet bins(int n, std::initializer_list<std::pair<int, int>> runs) {
  BinSet s(n);
  for (auto [lo, hi] : runs) {
    for (int k = lo; k < hi; ++k) s.set(k);
  }
  return s;
}

}  // namespace

TEST(FiberGraph, FullSquareConnected) {
  const auto f = fibers_of(full_square(), 16);
  const auto g = build_fiber_graph(f);
  EXPECT_EQ(g.components, 1);
  for (int v = 0; v < 32; ++v) EXPECT_EQ(g.label[v], 0);
  EXPECT_NEAR(g.xi_measure[0], kTwoPi, 1e-12);
}

TEST(FiberGraph, Figure1TwoComponents) {
  const auto f = fibers_of(figure1_region().region, 64);
  const auto g = build_fiber_graph(f);
  EXPECT_EQ(g.components, 2);
  EXPECT_EQ(oracle::count_components(f, edge_noise_floor(f.res)), 2);
  // Split at the seams 0 and pi.
  for (int p = 0; p < 64; ++p) EXPECT_EQ(g.label[p], g.label[p < 32 ? 0 : 32]);
  EXPECT_NE(g.label[0], g.label[32]);
}

TEST(FiberGraph, BlockDiagonalMeasures) {
  const int n = 16;
  const auto f = fibers_of(diagonal_blocks(kPi / 2), n);
  const auto g = build_fiber_graph(f);
  ASSERT_EQ(g.components, 2);
  std::vector<double> m = g.xi_measure;
  std::sort(m.begin(), m.end());
  EXPECT_NEAR(m[0], kPi / 2, 1e-12);
  EXPECT_NEAR(m[1], 3 * kPi / 2, 1e-12);
  double xi = 0, eta = 0;
  for (int c = 0; c < g.components; ++c) {
    xi += g.xi_measure[c];
    eta += g.eta_measure[c];
  }
  EXPECT_NEAR(xi, kTwoPi, 1e-12);
  EXPECT_NEAR(eta, kTwoPi, 1e-12);
}

TEST(DetectOsc, Figure1Pair) {
  const int n = 256;
  const auto f = fibers_of(figure1_region().region, n, 4);
  const auto v = detect_osc(f, check_gcc(f));
  ASSERT_EQ(v.kind, SymmetryKind::kPair);
  const BinSet half = BinSet::from_arcs({{0, kPi}}, n);
  int off_a = 0, off_b = 0;
  for (int k = 0; k < n; ++k) {
    off_a += v.a.test(k) != half.test(k);
    off_b += v.b.test(k) != half.test(k);
  }
  EXPECT_LE(off_a, 1);
  EXPECT_LE(off_b, 1);
  EXPECT_EQ(v.symdiff, 0.0);
  EXPECT_FALSE(v.reconciled);
}

TEST(DetectOsc, FullSquareNoPair) {
  const auto f = fibers_of(full_square(), 32);
  EXPECT_EQ(detect_osc(f, check_gcc(f)).kind, SymmetryKind::kNoPair);
}

TEST(DetectOsc, DiagonalBlocksMatchBruteForce) {
  const auto f = fibers_of(diagonal_blocks(kPi), 8);
  const auto v = detect_osc(f, check_gcc(f));
  const auto b = brute_force_osc(f);
  ASSERT_EQ(v.kind, SymmetryKind::kPair);
  EXPECT_EQ(b.kind, SymmetryKind::kPair);
  EXPECT_EQ(v.a, bins(8, {{0, 4}}));
  EXPECT_EQ(v.b, bins(8, {{0, 4}}));
  EXPECT_EQ(osc_check_pair(f, b.a, b.b), 0.0);
}

TEST(DetectOsc, Figure2NeedsReconciliationAt256) {
  const int n = 256;
  const auto f = fibers_of(figure2_region().region, n, 4);
  const auto v = detect_osc(f, check_gcc(f));
  ASSERT_EQ(v.kind, SymmetryKind::kPair);
  EXPECT_TRUE(v.reconciled);
  EXPECT_LE(v.symdiff, 8.0 / n * f.measure());
  const double target = 4 * kPi / 3;
  EXPECT_NEAR(v.a.measure(), target, 2 * kTwoPi / n);
  EXPECT_NEAR(v.b.measure(), target, 2 * kTwoPi / n);
}

TEST(DetectOsc, Figure2ExactWhenAligned) {
  // n divisible by 3 puts the 2pi/3 seams on bin boundaries.
  const auto f = fibers_of(figure2_region().region, 96, 4);
  const auto v = detect_osc(f, check_gcc(f));
  ASSERT_EQ(v.kind, SymmetryKind::kPair);
  EXPECT_FALSE(v.reconciled);
  EXPECT_EQ(v.symdiff, 0.0);
  EXPECT_NEAR(v.a.measure(), 4 * kPi / 3, 1e-12);
}

TEST(DetectOsc, WeakGccFailure) {
  const SpacetimeRegion g(kTwoPi, make_node(CharBand{CharFamily::kXi, {{0, kPi}}}));
  const auto f = fibers_of(g, 32);
  const auto v = detect_osc(f, check_gcc(f));
  EXPECT_EQ(v.kind, SymmetryKind::kWeakGccFailure);
  EXPECT_FALSE(v.a.empty());
  EXPECT_TRUE(v.b.empty());
}

TEST(DetectOsc, RotationInvariant) {
  const auto m = rasterize(figure1_region().region, 64, 2);
  const auto f = fiber_profiles(m);
  const auto v = detect_osc(f, check_gcc(f));
  for (int k : {1, 7, 20}) {
    const auto g = fiber_profiles(m.shifted_x(k));
    const auto w = detect_osc(g, check_gcc(g));
    ASSERT_EQ(w.kind, v.kind);
    // Both families move by k bins; the chosen component may swap with its
    // partner, so compare as a partition.
    const BinSet sa = v.a.shifted(k), sb = v.b.shifted(k);
    EXPECT_TRUE((w.a == sa && w.b == sb) || (w.a == sa.complement() && w.b == sb.complement()));
  }
}

TEST(DetectOsc, ComponentCountBound) {
  for (const auto& g : {figure1_region().region, diagonal_blocks(kPi / 2), full_square()}) {
    const auto f = fibers_of(g, 64);
    const auto r = check_gcc(f);
    const auto v = detect_osc(f, r);
    ASSERT_TRUE(r.holds);
    EXPECT_LE(std::max(1, v.components), static_cast<int>(std::floor(kTwoPi / r.c0_est)) + 1);
    for (const auto& c : v.decomposition.parts) EXPECT_GE(c.a.measure() + 1e-12, r.c0_est);
  }
}

TEST(OscCheck, Examples) {
  const int n = 64;
  const auto f = fibers_of(figure1_region().region, n);
  EXPECT_EQ(osc_check_pair(f, BinSet(n), BinSet(n)), 0.0);
  const BinSet half = BinSet::from_arcs({{0, kPi}}, n);
  EXPECT_EQ(osc_check_pair(f, half, half), 0.0);
  EXPECT_GT(osc_check_pair(f, half, BinSet::from_arcs({{0, kPi / 2}}, n)), 0.1);
  EXPECT_THROW(osc_check_pair(f, BinSet(8), half), std::invalid_argument);
}

TEST(BruteForce, Limits) {
  const auto f = fibers_of(full_square(), 16);
  EXPECT_THROW(brute_force_osc(f), std::invalid_argument);
}

TEST(BruteForce, RandomMasksAgreeWithGraph) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 6 + 2 * (trial % 3);
    const auto fam = static_cast<oracle::MaskFamily>(trial % 3);
    const auto f = fiber_profiles(oracle::random_mask(n, fam, rng));
    const auto v = detect_osc(f, check_gcc(f));
    const auto b = brute_force_osc(f);
    ASSERT_EQ(v.kind, b.kind) << "trial " << trial;
    if (v.kind == SymmetryKind::kPair) {
      EXPECT_EQ(osc_check_pair(f, v.a, v.b), 0.0);
      EXPECT_EQ(osc_check_pair(f, b.a, b.b), 0.0);
    }
  }
}

TEST(Witness, LevelFormula) {
  const int n = 96;
  const auto w = witness_from_pair(BinSet::from_arcs({{0, kPi}}, n), BinSet::from_arcs({{0, kPi}}, n));
  EXPECT_NEAR(w.level, -1.0, 1e-12);
  const BinSet big = BinSet::from_arcs({{0, 2 * kPi / 3}, {4 * kPi / 3, kTwoPi}}, n);
  const auto w2 = witness_from_pair(big, big);
  EXPECT_NEAR(w2.level, -2.0, 1e-12);
  EXPECT_NEAR(w2.state.mean_u0x(), 0.0, 1e-12);
  EXPECT_NEAR(w2.i0, 2 * (big.measure() + big.measure()), 1e-12);
}

TEST(Witness, Figure1Energy) {
  const int n = 256;
  const auto f = fibers_of(figure1_region().region, n, 4);
  const auto v = detect_osc(f, check_gcc(f));
  const auto w = witness_from_pair(v.a, v.b);
  EXPECT_NEAR(w.state.energy(), 8 * kPi, 1e-9);
}

TEST(Witness, RejectsTrivialPairs) {
  EXPECT_THROW(witness_from_pair(BinSet(16), BinSet(16)), std::invalid_argument);
  EXPECT_THROW(witness_from_pair(BinSet(16, true), BinSet(16, true)), std::invalid_argument);
}

TEST(Witness, ObservedEnergyVanishesWithResolution) {
  for (int n : {64, 128}) {
    const auto m = rasterize(figure1_region().region, n, 2);
    const auto f = fiber_profiles(m);
    const auto v = detect_osc(f, check_gcc(f));
    const auto w = witness_from_pair(v.a, v.b);
    const double obs = observed_energy(solve_free_wave(w.state, m.resolution()), m);
    EXPECT_LE(obs, (kTwoPi / n) * w.state.energy());
  }
}

TEST(Witness, ZeroFiberDataIsMeanFree) {
  const int n = 32;
  BinSet z(n);
  z.set(3);
  z.set(4);
  z.set(9);
  const auto s = zero_fiber_witness(BinSet(n), z);
  EXPECT_NEAR(s.mean_u0x(), 0.0, 1e-12);
  const auto q = s.q();
  EXPECT_NEAR(q[3], 1.0, 1e-12);
  EXPECT_NEAR(q[4], -1.0, 1e-12);
  // Odd count: the last bin is dropped and the other family stays silent.
  EXPECT_NEAR(q[9], 0.0, 1e-12);
  for (double v : s.p()) EXPECT_EQ(v, 0.0);
  BinSet one(n);
  one.set(5);
  EXPECT_NEAR(zero_fiber_witness(BinSet(n), one).mean_u0x(), 0.0, 1e-12);
  EXPECT_THROW(zero_fiber_witness(BinSet(n), BinSet(n)), std::invalid_argument);
}

TEST(SymmetricPair, Examples) {
  const int n = 16;
  const BinSet lo = BinSet::from_arcs({{0, kPi}}, n), hi = lo.complement();
  auto r = classify_symmetric_pair({{-1, lo}, {1, hi}}, {{-1, lo}, {1, hi}});
  EXPECT_EQ(r.cls, PairClass::kFinite);
  EXPECT_EQ(r.levels_count, 2);

  r = classify_symmetric_pair({{0, BinSet(n, true)}}, {{0, BinSet(n, true)}});
  EXPECT_EQ(r.cls, PairClass::kFinite);
  EXPECT_EQ(r.levels_count, 1);

  const BinSet quarter = BinSet::from_arcs({{0, kPi / 2}}, n);
  r = classify_symmetric_pair({{1, lo}, {0, hi}}, {{1, quarter}, {0, quarter.complement()}});
  EXPECT_EQ(r.cls, PairClass::kNeither);
  EXPECT_NE(r.violated.find("mean"), std::string::npos);
}

TEST(SymmetricPair, ClauseViolations) {
  const int n = 8;
  const BinSet a = BinSet::from_indices({0, 1, 2, 3}, n), b = a.complement();
  EXPECT_NE(classify_symmetric_pair({{1, a}, {1, b}}, {{1, a}, {1, b}}).violated.find("distinct"), std::string::npos);
  EXPECT_NE(classify_symmetric_pair({{1, a}, {-1, a}}, {{1, a}, {-1, b}}).violated.find("disjoint"), std::string::npos);
  EXPECT_NE(classify_symmetric_pair({{1, a}}, {{1, a}}).violated.find("cover"), std::string::npos);
  EXPECT_EQ(classify_symmetric_pair({{1, a}, {-1, b}}, {{1, a}, {-1, b}}, 0.01).cls, PairClass::kCountable);
}
