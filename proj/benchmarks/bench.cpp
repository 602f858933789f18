#include <benchmark/benchmark.h>

#include "virodyn/continuation.hpp"
#include "virodyn/integrator.hpp"
#include "virodyn/stability.hpp"

using namespace virodyn;

namespace {
const ModelParams kBase{0.1, 0.01, 0.1, 100.0};
}

static void BM_Rhs(benchmark::State& state) {
  const State s{50.0, 10.0, 10.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs(kBase, s));
  }
}
BENCHMARK(BM_Rhs);

static void BM_Jacobian(benchmark::State& state) {
  const State s{50.0, 10.0, 10.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(jacobian(kBase, s));
  }
}
BENCHMARK(BM_Jacobian);

static void BM_RouthHurwitz(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(routh_hurwitz(charpoly_coexistence(kBase)));
  }
}
BENCHMARK(BM_RouthHurwitz);

static void BM_CubicRoots(benchmark::State& state) {
  const CubicCoefficients c = charpoly_coexistence(kBase);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cubic_roots(c));
  }
}
BENCHMARK(BM_CubicRoots);

static void BM_IntegrateTransient(benchmark::State& state) {
  const double horizon = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(kBase, {50.0, 10.0, 10.0}, horizon));
  }
}
BENCHMARK(BM_IntegrateTransient)->Arg(100)->Arg(1000);

static void BM_IntegrateCycle(benchmark::State& state) {
  ModelParams p = kBase;
  p.xi = 0.06;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(p, {50.0, 10.0, 10.0}, 1000.0));
  }
}
BENCHMARK(BM_IntegrateCycle);

static void BM_RegionScan(benchmark::State& state) {
  std::vector<double> ms, xis;
  for (int i = 0; i < 32; ++i) {
    ms.push_back(0.02 + 0.015 * i);
    xis.push_back(0.005 + 0.006 * i);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(scan_region(ms, xis, {0.1}));
  }
}
BENCHMARK(BM_RegionScan);

static void BM_BranchContinuation(benchmark::State& state) {
  ContinuationOptions opts;
  opts.classify_hopf_points = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(continue_equilibrium(
        kBase, EquilibriumKind::Coexistence, ContinuationParam::xi, 0.02, 0.06,
        opts));
  }
}
BENCHMARK(BM_BranchContinuation);

BENCHMARK_MAIN();
