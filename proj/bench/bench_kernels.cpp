// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to compare.
#include <benchmark/benchmark.h>

#include "wits/montecarlo.hpp"
#include "wits/skewnormal.hpp"
#include "wits/strategies.hpp"

namespace {

const wits::ProblemParams kParams = wits::ProblemParams::make(0.1, 0.01);

wits::Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? wits::Execution::Serial : wits::Execution::Parallel;
}

void BM_SimulateTwoPoint(benchmark::State& state) {
  wits::SimConfig cfg;
  cfg.n_samples = 1 << 20;
  for (auto _ : state) {
    auto r = wits::simulate_two_point({0.3}, kParams, cfg, mode(state));
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cfg.n_samples));
}
BENCHMARK(BM_SimulateTwoPoint)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SimulateHybrid(benchmark::State& state) {
  wits::SimConfig cfg;
  cfg.n_samples = 1 << 18;
  const auto cp = wits::CoordParams::make(0.05, -0.5, kParams);
  for (auto _ : state) {
    auto r = wits::simulate_hybrid_conditional(cp, kParams, cfg, mode(state));
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cfg.n_samples));
}
BENCHMARK(BM_SimulateHybrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CoordOptimum(benchmark::State& state) {
  for (auto _ : state) {
    auto r = wits::mmse_coord(0.05, kParams, {}, mode(state));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_CoordOptimum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LinDpcCurve(benchmark::State& state) {
  const auto grid = wits::linspace(0.0, 0.1, 64);
  for (auto _ : state) {
    auto c = wits::curve(wits::Strategy::LinDpc, kParams, grid, {}, mode(state));
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_LinDpcCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
