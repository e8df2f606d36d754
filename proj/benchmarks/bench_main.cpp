#include <benchmark/benchmark.h>

#include <random>

#include "wavesym/estimator.hpp"
#include "wavesym/fibers.hpp"
#include "wavesym/raster.hpp"
#include "wavesym/symmetry.hpp"
#include "wavesym/verdict.hpp"
#include "wavesym/wave.hpp"

using namespace wavesym;

namespace {

const SpacetimeRegion& fig2() {
  static const auto g = figure2_region().region;
  return g;
}

WaveState random_state(int n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  SpectralData d(16);
  for (int k = 1; k <= 16; ++k) {
    d.a_at(k) = {nd(rng) / k, nd(rng) / k};
    d.a_at(-k) = std::conj(d.a_at(k));
    d.b_at(k) = {nd(rng), nd(rng)};
    d.b_at(-k) = std::conj(d.b_at(k));
  }
  return d.sample(n);
}

}  // namespace

static void BM_Rasterize(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(rasterize(fig2(), n, 4, 1));
  st.SetComplexityN(n);
}
BENCHMARK(BM_Rasterize)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNSquared);

static void BM_FiberProfiles(benchmark::State& st) {
  const auto m = rasterize(fig2(), static_cast<int>(st.range(0)), 4);
  for (auto _ : st) benchmark::DoNotOptimize(fiber_profiles(m));
}
BENCHMARK(BM_FiberProfiles)->RangeMultiplier(2)->Range(64, 1024);

static void BM_DetectOsc(benchmark::State& st) {
  const auto f = fiber_profiles(rasterize(fig2(), static_cast<int>(st.range(0)), 4));
  const auto gcc = check_gcc(f);
  for (auto _ : st) benchmark::DoNotOptimize(detect_osc(f, gcc));
}
BENCHMARK(BM_DetectOsc)->RangeMultiplier(2)->Range(64, 1024);

static void BM_Classify(benchmark::State& st) {
  const auto m = rasterize(fig2(), static_cast<int>(st.range(0)), 4);
  for (auto _ : st) benchmark::DoNotOptimize(classify(m));
}
BENCHMARK(BM_Classify)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_IndicatorFourier(benchmark::State& st) {
  const auto m = rasterize(fig2(), 256, 2);
  const int order = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(indicator_fourier(m, order));
}
BENCHMARK(BM_IndicatorFourier)->RangeMultiplier(2)->Range(16, 64)->Unit(benchmark::kMillisecond);

static void BM_GramEigen(benchmark::State& st) {
  const int modes = static_cast<int>(st.range(0));
  const auto s = indicator_fourier(rasterize(fig2(), 256, 2), 2 * modes);
  for (auto _ : st) benchmark::DoNotOptimize(min_rayleigh(gram_matrix(s, modes)));
}
BENCHMARK(BM_GramEigen)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMillisecond);

static void BM_FreeWave(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto s = random_state(n);
  const auto res = Resolution::make(n, kTwoPi);
  for (auto _ : st) benchmark::DoNotOptimize(solve_free_wave(s, res));
  st.SetComplexityN(n);
}
BENCHMARK(BM_FreeWave)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

static void BM_ForcedWave(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto m = rasterize(fig2(), n, 2);
  const auto f = Forcing::from_density(m.resolution(), [](double t, double x) { return std::sin(x - t); });
  const auto s = random_state(n);
  for (auto _ : st) benchmark::DoNotOptimize(solve_forced_wave(s, f, m));
}
BENCHMARK(BM_ForcedWave)->RangeMultiplier(2)->Range(64, 512);
BENCHMARK_MAIN();
