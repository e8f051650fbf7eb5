#include <limits>

#include <benchmark/benchmark.h>

#include "profmon/chart.hpp"
#include "profmon/estimate.hpp"
#include "profmon/rng.hpp"
#include "profmon/simulate.hpp"

using namespace profmon;

static void BM_PhiloxBlock(benchmark::State& state) {
  Philox4x32::Counter ctr{0, 0, 0, 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(Philox4x32::block(ctr, {1, 2}));
    ++ctr[0];
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxBlock);

static void BM_Normal(benchmark::State& state) {
  NormalStream rng(kDefaultSeed, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.next());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Normal);

static void BM_GenerateSample(benchmark::State& state) {
  const auto model = reference_model(0.5);
  NormalStream rng(kDefaultSeed, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(generate_sample(model, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GenerateSample);

static void BM_FitProfiles(benchmark::State& state) {
  const auto model = reference_model(0.5);
  NormalStream rng(kDefaultSeed, 0, 0);
  const auto y = generate_sample(model, rng);
  CoefMatrix fit;
  for (auto _ : state) {
    fit_profiles_into(y, model.design(), fit);
    benchmark::DoNotOptimize(fit.slopes.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FitProfiles);

// Per-step cost of a run: a chart that never signals, censored at range(0).
static void BM_RunLengthStep(benchmark::State& state) {
  const auto model = reference_model(0.5);
  SimulationConfig cfg;
  cfg.max_steps = static_cast<std::uint64_t>(state.range(0));
  const ChartConfig chart{0.2, std::numeric_limits<double>::infinity()};
  const auto scenario = ShiftScenario::in_control(2);
  std::uint32_t r = 0;
  for (auto _ : state) {
    NormalStream rng(kDefaultSeed, 0, r++);
    benchmark::DoNotOptimize(run_length(model, scenario, cfg, chart, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunLengthStep)->Arg(1000);

static void BM_EstimateArlCell(benchmark::State& state) {
  const auto model = reference_model(0.1);
  SimulationConfig cfg;
  cfg.replications = 500;
  cfg.workers = 1;
  auto scenario = ShiftScenario::in_control(2);
  scenario.intercept_shifts[0] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_arl(model, scenario, cfg, ChartConfig{}));
}
BENCHMARK(BM_EstimateArlCell)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
