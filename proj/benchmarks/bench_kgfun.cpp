#include <benchmark/benchmark.h>

#include "kgv/kgfun.hpp"

using namespace kgv;

static void BM_SigmaPoint(benchmark::State& state) {
  AlphaParam a = AlphaParam::certifiable(1.5);
  double x1 = 0.4, x2 = 2.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sigma(a, x1, x2));
    x1 += 1e-12;  // defeat value caching
  }
}
BENCHMARK(BM_SigmaPoint);

static void BM_SigmaInterval(benchmark::State& state) {
  AlphaParam a = AlphaParam::certifiable(1.5);
  Interval x1(0.4, 0.41), x2(2.7, 2.71);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sigma(a, x1, x2));
  }
}
BENCHMARK(BM_SigmaInterval);

static void BM_WeightAngular(benchmark::State& state) {
  double x1 = -0.3, x2 = 1.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(weight_1(x1, x2));
    x1 -= 1e-12;
  }
}
BENCHMARK(BM_WeightAngular);

static void BM_JacobianStable(benchmark::State& state) {
  double x1 = 50.0, x2 = 50.0 + 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(jacobian_stable(x1, x2));
  }
}
BENCHMARK(BM_JacobianStable);

BENCHMARK_MAIN();
