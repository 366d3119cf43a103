#include <benchmark/benchmark.h>

#include "kgv/interval.hpp"

using namespace kgv;

static void BM_IntervalMul(benchmark::State& state) {
  Interval x(0.7, 1.3);
  Interval y(-1.9, 2.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mul(x, y));
  }
}
BENCHMARK(BM_IntervalMul);

static void BM_IntervalDiv(benchmark::State& state) {
  Interval x(0.75, 1.25);
  Interval y(2.0, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(div(x, y));
  }
}
BENCHMARK(BM_IntervalDiv);

static void BM_PowThreeQuarters(benchmark::State& state) {
  Interval x(1.8, 2.2);
  Rational p(3, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pow_rational(x, p));
  }
}
BENCHMARK(BM_PowThreeQuarters);

static void BM_SinEnclosure(benchmark::State& state) {
  Interval x(0.3, 1.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sin_enclosure(x));
  }
}
BENCHMARK(BM_SinEnclosure);

BENCHMARK_MAIN();
