#include <benchmark/benchmark.h>

#include <variant>

#include "kgv/certifier.hpp"

using namespace kgv;

static void BM_FactoredBoundE2(benchmark::State& state) {
  InequalityTarget target = make_target(Family::E2);
  AngleBox box{Interval(0.1, 0.2), Interval(0.4, 0.5), 3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(target.factored_bound(box));
  }
}
BENCHMARK(BM_FactoredBoundE2);

static void BM_FactoredBoundElem2(benchmark::State& state) {
  InequalityTarget target = make_target(Family::Elem2);
  AngleBox box{Interval(1.2, 1.3), Interval(1.4, 1.5), 3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(target.factored_bound(box));
  }
}
BENCHMARK(BM_FactoredBoundElem2);

static void BM_CertifyEndToEnd(benchmark::State& state) {
  CertifyConfig config;
  config.validate_samples = 2000;
  config.workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto result = certify(make_target(Family::Elem2), config);
    benchmark::DoNotOptimize(std::get<Certificate>(result).boxes.size());
  }
}
BENCHMARK(BM_CertifyEndToEnd)->Arg(1)->Arg(4);

static void BM_ValidateReformulation(benchmark::State& state) {
  InequalityTarget target = make_target(Family::E5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(validate_reformulation(target, 10000).max_rel_discrepancy);
  }
}
BENCHMARK(BM_ValidateReformulation);

BENCHMARK_MAIN();
