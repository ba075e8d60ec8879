#include <benchmark/benchmark.h>

#include <random>

#include "fatou/dynamics.hpp"
#include "fatou/monodromy.hpp"
#include "fatou/siegel.hpp"

using namespace fatou;

static void BM_SkewOrbit(benchmark::State& state) {
  const PlanarMap f = make_skew_siegel();
  for (auto _ : state) {
    const Orbit o = iterate(f, {0.05, 0.0}, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(o.points.back());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SkewOrbit)->Arg(1000)->Arg(100000);

static void BM_CuspStep(benchmark::State& state) {
  const PlanarMap f = make_cusp(2, 3, static_cast<int>(state.range(0)));
  Point p = cusp_curve_point(2, 3, 1.0) + Point{0.01, -0.01};
  for (auto _ : state) {
    p = f(p);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_CuspStep)->Arg(2)->Arg(6);

static void BM_BinaryFormRoots(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Complex> c(static_cast<std::size_t>(state.range(0)) + 1);
  for (auto& x : c) x = {n(rng), n(rng)};
  const BinaryForm f(static_cast<int>(state.range(0)), c);
  for (auto _ : state) benchmark::DoNotOptimize(binary_form_roots(f));
}
BENCHMARK(BM_BinaryFormRoots)->Arg(3)->Arg(8)->Arg(16);

static void BM_Linearizer(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_linearizer(kGoldenMean, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Linearizer)->Arg(50)->Arg(200);

static void BM_MonodromyLoop(benchmark::State& state) {
  const CuspParams c{3, 7, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(continue_loop(c, 1.0, 16 * c.k * c.p * c.q));
}
BENCHMARK(BM_MonodromyLoop)->Arg(3)->Arg(6);

BENCHMARK_MAIN();
