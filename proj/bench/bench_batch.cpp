#include <benchmark/benchmark.h>

#include "ebike/batch.hpp"
#include "ebike/scenario.hpp"

using namespace ebike;

namespace {

std::vector<sim::ScenarioConfig> session_batch(int n) {
  std::vector<sim::ScenarioConfig> configs;
  for (int i = 0; i < n; ++i) {
    auto c = scenario::closed_loop_two_lap();
    c.rider.torque_noise = 2.0;
    c.sim.seed = static_cast<std::uint64_t>(i);
    configs.push_back(c);
  }
  return configs;
}

const std::vector<int> kAllY{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};

void BM_RunSerial(benchmark::State& state) {
  const auto configs = session_batch(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(batch::run_serial(configs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RunParallel(benchmark::State& state) {
  const auto configs = session_batch(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(batch::run_parallel(configs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepSerial(benchmark::State& state) {
  const auto cfg = scenario::trainer();
  for (auto _ : state) benchmark::DoNotOptimize(batch::sweep_serial(cfg, kAllY, {}, 0.5, 1));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto cfg = scenario::trainer();
  for (auto _ : state) benchmark::DoNotOptimize(batch::sweep_parallel(cfg, kAllY, {}, 0.5, 1));
}

}  // namespace

BENCHMARK(BM_RunSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RunParallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
