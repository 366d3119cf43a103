#include <benchmark/benchmark.h>

#include "kgv/bilinear.hpp"

using namespace kgv;

static void BM_PropagateSlice(benchmark::State& state) {
  SpaceTimeGrid grid(96.0, static_cast<int>(state.range(0)), 0.1, 8.0, 3);
  FrequencyProfile p = FrequencyProfile::bump_on_lattice(1.0, 2.0, grid.L);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(p, t, grid).size());
    t += 0.1;
  }
}
BENCHMARK(BM_PropagateSlice)->Arg(4096)->Arg(16384);

static void BM_FrequencyNorm(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  FrequencyProfile p1 = FrequencyProfile::bump(1.0, 2.0, n);
  FrequencyProfile p2 = FrequencyProfile::bump(3.0, 4.0, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bilinear_norm_frequency(p1, p2));
  }
}
BENCHMARK(BM_FrequencyNorm)->Arg(128)->Arg(512);

static void BM_BoundAngular(benchmark::State& state) {
  FrequencyProfile p1 = FrequencyProfile::bump(1.0, 2.0, 256);
  FrequencyProfile p2 = FrequencyProfile::bump(3.0, 4.0, 256);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bound_1(p1, p2));
  }
}
BENCHMARK(BM_BoundAngular);

BENCHMARK_MAIN();
