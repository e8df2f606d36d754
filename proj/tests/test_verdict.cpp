#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"
#include "wavesym/report.hpp"
#include "wavesym/wave.hpp"

using namespace wavesym;

namespace {

SpacetimeRegion cylinder(double lo, double hi, double T = kTwoPi) {
  return SpacetimeRegion(T, make_node(Cylinder{{0, T}, {{lo, hi}}}));
}

bool has_reason(const Verdict& v, const std::string& needle) {
  for (const auto& r : v.reasons) {
    if (r.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(Classify, Figure1NotObservable) {
  const auto v = classify(rasterize(figure1_region().region, 128, 4));
  EXPECT_EQ(v.observable, Tri::kNo);
  EXPECT_EQ(v.ucp, Tri::kNo);
  EXPECT_EQ(v.controllable, v.observable);
  EXPECT_TRUE(v.gcc.holds);
  EXPECT_EQ(v.symmetry.kind, SymmetryKind::kPair);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->kind, "osc_pair");
  EXPECT_NEAR(v.witness->total_energy, 8 * kPi, 1e-9);
  EXPECT_LE(v.witness->ratio, 5 * v.res.dt());
  EXPECT_TRUE(has_reason(v, "gcc holds"));
  EXPECT_TRUE(has_reason(v, "symmetry pair"));
  EXPECT_EQ(exit_code(v), kExitNotObservable);
}

TEST(Classify, Figure2NotObservable) {
  const auto v = classify(rasterize(figure2_region().region, 128, 4));
  EXPECT_EQ(v.observable, Tri::kNo);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_LE(v.witness->ratio, 5 * v.res.dt());
}

TEST(Classify, FullSquareObservable) {
  ClassifyOptions opt;
  opt.estimate_modes = 8;
  const auto v = classify(rasterize(cylinder(0, kTwoPi), 64, 1), opt);
  EXPECT_EQ(v.observable, Tri::kYes);
  EXPECT_EQ(v.ucp, Tri::kYes);
  EXPECT_FALSE(v.witness.has_value());
  ASSERT_TRUE(v.estimate.has_value());
  EXPECT_NEAR(v.estimate->lambda_min, kPi, 1e-9);
  EXPECT_EQ(v.estimate->trace.size(), 3u);
  EXPECT_EQ(exit_code(v), kExitObservable);
  EXPECT_FALSE(witness_state(v).has_value());
}

TEST(Classify, CylinderObservable) {
  const auto v = classify(rasterize(cylinder(0, 1.0), 128, 2));
  EXPECT_EQ(v.observable, Tri::kYes);
  EXPECT_NEAR(v.gcc.c0_est, 1.0, 2 * v.res.dx);
}

TEST(Classify, ShortCylinderFailsGcc) {
  // Horizon shorter than the gap: some lines miss G.
  const auto v = classify(rasterize(cylinder(0, 1.0, 2.0), 128, 2));
  EXPECT_EQ(v.observable, Tri::kNo);
  EXPECT_EQ(v.ucp, Tri::kNo);
  EXPECT_EQ(v.symmetry.kind, SymmetryKind::kWeakGccFailure);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->kind, "zero_fiber");
  // Zero fibers carry mass below the floor, so the leak is at most floor / 2.
  EXPECT_LE(v.witness->ratio, v.gcc.gcc_floor / 2);
  const auto w = witness_state(v);
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR(w->mean_u0x(), 0.0, 1e-12);
}

TEST(Classify, EmptyMaskThrows) {
  const Resolution r = Resolution::make(16, kTwoPi);
  EXPECT_THROW(classify(RasterMask::from_cells(r, std::vector<double>(16 * 16, 0.0))), std::invalid_argument);
}

TEST(Classify, Deterministic) {
  const auto m = rasterize(figure2_region().region, 64, 2);
  EXPECT_EQ(classify(m), classify(m));
}

TEST(Classify, TheoremConsistency) {
  // observable implies gcc and no pair; a pair or a gcc failure implies not observable.
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto fam = static_cast<oracle::MaskFamily>(trial % 3);
    const auto m = oracle::random_mask(16, fam, rng);
    if (m.zero_measure()) continue;
    const auto v = classify(m);
    if (v.observable == Tri::kYes) {
      EXPECT_TRUE(v.gcc.holds);
      EXPECT_EQ(v.symmetry.kind, SymmetryKind::kNoPair);
    }
    if (v.symmetry.kind != SymmetryKind::kNoPair) EXPECT_NE(v.observable, Tri::kYes);
    if (v.ucp == Tri::kYes) EXPECT_TRUE(v.gcc.weak_holds);
    EXPECT_EQ(v.controllable, v.observable);
  }
}

TEST(Product, FastPathMatchesClassify) {
  const std::vector<std::pair<std::vector<Interval>, std::vector<Interval>>> cases = {
      {{{0, kTwoPi}}, {{0, 1.0}}},
      {{{0, 3.0}}, {{0, 3.5}}},
      {{{0, 1.0}}, {{0, 1.0}}},
      {{{0, 2.0}, {3.0, 5.0}}, {{1.0, 4.0}}},
  };
  for (int n : {64, 128, 256}) {
    for (const auto& [e, f] : cases) {
      const auto fast = classify_product(e, f, kTwoPi, n, 2);
      const auto slow = classify(rasterize(SpacetimeRegion(kTwoPi, make_node(Product{e, f})), n, 2));
      EXPECT_EQ(fast.observable, slow.observable) << n;
      EXPECT_EQ(fast.ucp, slow.ucp) << n;
      ASSERT_TRUE(fast.product_sum.has_value());
      if (fast.observable == Tri::kYes) EXPECT_GE(*fast.product_sum, kTwoPi);
    }
  }
  EXPECT_THROW(classify_product({{1, 1}}, {{0, 1}}, kTwoPi, 64), std::invalid_argument);
}

TEST(OpenEverywhere, CylinderYes) {
  const auto g = cylinder(0.5, 2.0);
  const auto v = classify_open_everywhere(rasterize(g, 64, 2), g);
  EXPECT_EQ(v.observable, Tri::kYes);
  ASSERT_TRUE(v.every_line_c0.has_value());
  EXPECT_NEAR(*v.every_line_c0, 1.5, 0.1);
}

TEST(OpenEverywhere, Figure1FallsBack) {
  const auto fc = figure1_region();
  const auto v = classify_open_everywhere(rasterize(fc.region, 64, 2), fc.region);
  EXPECT_EQ(v.observable, Tri::kNo);
  EXPECT_TRUE(has_reason(v, "every-line gcc fails"));
}

TEST(OpenEverywhere, RasterRejected) {
  GrayImage img{8, 8, std::vector<unsigned char>(64, 255)};
  const auto dir = std::filesystem::temp_directory_path();
  write_pgm(dir / "wavesym_open.pgm", img);
  const auto g = parse_region("region { T=2*pi raster { file=\"wavesym_open.pgm\" } }", dir);
  EXPECT_THROW(classify_open_everywhere(rasterize(g, 16, 1), g), std::invalid_argument);
}

TEST(Necessity, ProbesRespectFiberMass) {
  for (const auto& g : {figure1_region().region, cylinder(0, 1.0), cylinder(0, 1.0, 2.0)}) {
    const auto m = rasterize(g, 64, 2);
    const auto rep = gcc_necessity_check(m, 6);
    ASSERT_EQ(rep.probes.size(), 6u);
    EXPECT_TRUE(rep.all_pass);
    for (const auto& p : rep.probes) EXPECT_LE(p.ratio, p.fiber_mass + rep.tolerance);
  }
}

TEST(Names, Stable) {
  EXPECT_STREQ(tri_name(Tri::kYes), "yes");
  EXPECT_STREQ(tri_name(Tri::kNo), "no");
  EXPECT_STREQ(tri_name(Tri::kIndeterminate), "indeterminate");
  EXPECT_STREQ(symmetry_kind_name(SymmetryKind::kWeakGccFailure), "weak_gcc_failure");
  EXPECT_STREQ(pair_class_name(PairClass::kFinite), "S2c");
}
