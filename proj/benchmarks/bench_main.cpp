#include <benchmark/benchmark.h>

#include <random>

#include "v2xedge/control.hpp"
#include "v2xedge/geometry.hpp"
#include "v2xedge/sim.hpp"

using namespace v2x;

namespace {

SlotContext table_context(std::int64_t t) {
  RunConfig cfg;
  return make_slot_context(t, cfg.geometry, cfg.radio, cfg.compute, 1.0, derive(cfg).power_cap);
}

void BM_SolveSlotOffload(benchmark::State& state) {
  const SlotContext ctx = table_context(2);
  const SlotState s{2, 40, 0, 5e5};
  ControlConfig cfg;
  cfg.eta = 1e13;
  for (auto _ : state) benchmark::DoNotOptimize(solve_slot(s, ctx, cfg));
}
BENCHMARK(BM_SolveSlotOffload);

// Backlog below the time-budget limit, so the SCA has to iterate.
void BM_SolveSlotBacklogBound(benchmark::State& state) {
  const SlotContext ctx = table_context(2);
  const SlotState s{2, 4, 0, 5e5};
  ControlConfig cfg;
  cfg.eta = 1e13;
  for (auto _ : state) benchmark::DoNotOptimize(solve_slot(s, ctx, cfg));
}
BENCHMARK(BM_SolveSlotBacklogBound);

void BM_ScaPowerAllocation(benchmark::State& state) {
  const SlotContext ctx = table_context(4);
  const SlotState s{4, 30, 0, 5e5};
  const double c = 0.5 * max_allowable_c_in(ctx.power_cap, ctx.radio.p_r_max, s, ctx);
  for (auto _ : state) benchmark::DoNotOptimize(sca_power_allocation(c, s, ctx, ControlConfig{}));
}
BENCHMARK(BM_ScaPowerAllocation);

void BM_SampleInterferers(benchmark::State& state) {
  const NetworkGeometry g;
  std::mt19937_64 rng(1);
  const double half = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(realized_interference(sample_interferers(g, half, rng, 0.2), g));
  }
}
BENCHMARK(BM_SampleInterferers)->Arg(500)->Arg(10000);

void BM_Upsilon(benchmark::State& state) {
  NetworkGeometry g;
  g.pathloss_exponent = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(upsilon(g));
}
BENCHMARK(BM_Upsilon)->Arg(20)->Arg(25);

void BM_Run(benchmark::State& state) {
  RunConfig cfg;
  cfg.t_end = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
}
BENCHMARK(BM_Run)->Arg(3000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
