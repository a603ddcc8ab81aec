#include "fptqv/mc_oracle.hpp"
#include "fptqv/time_change.hpp"
#include "fptqv/wiener_one_sided.hpp"
#include "fptqv/wiener_two_sided.hpp"

#include <benchmark/benchmark.h>

using namespace fptqv;

static void BM_simulate_one_sided(benchmark::State& state) {
    const auto clock = QuadraticVariationPath::identity();
    const OneSidedBoundary b(1.0);
    SimConfig cfg;
    cfg.n_paths = state.range(0);
    cfg.horizon = 2.0;
    cfg.clock_steps = 256;
    cfg.seed = 17;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_one_sided(clock, b, cfg));
    state.SetItemsProcessed(state.iterations() * cfg.n_paths);
}
BENCHMARK(BM_simulate_one_sided)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond);

static void BM_simulate_one_sided_no_bridge(benchmark::State& state) {
    const auto clock = QuadraticVariationPath::identity();
    const OneSidedBoundary b(1.0);
    SimConfig cfg;
    cfg.n_paths = 20000;
    cfg.horizon = 2.0;
    cfg.clock_steps = 256;
    cfg.seed = 17;
    cfg.bridge_correction = false;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_one_sided(clock, b, cfg));
    state.SetItemsProcessed(state.iterations() * cfg.n_paths);
}
BENCHMARK(BM_simulate_one_sided_no_bridge)->Unit(benchmark::kMillisecond);

static void BM_simulate_two_sided(benchmark::State& state) {
    const auto clock = QuadraticVariationPath::identity();
    const TwoSidedBoundary b(1.0, -1.0);
    SimConfig cfg;
    cfg.n_paths = 20000;
    cfg.horizon = 2.0;
    cfg.clock_steps = 256;
    cfg.seed = 17;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_two_sided(clock, b, cfg));
    state.SetItemsProcessed(state.iterations() * cfg.n_paths);
}
BENCHMARK(BM_simulate_two_sided)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
