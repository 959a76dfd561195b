// Serial reference vs OpenMP versions of the two Monte Carlo loops.
// The thread count is the benchmark argument.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "betapoly/montecarlo.hpp"

using namespace betapoly;

namespace {

SimConfig trial_config() {
    SimConfig c;
    c.objective = Objective::Perimeter;
    c.n = 3;
    c.beta = 0.0;
    c.sample_sizes = {1000};
    c.trials = 64;
    c.master_seed = 1;
    return c;
}

constexpr std::uint64_t tail_draws = 1 << 18;

void BM_trials_serial(benchmark::State& state) {
    const SimConfig c = trial_config();
    for (auto _ : state) benchmark::DoNotOptimize(run_trials_serial(c));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.trials));
}

void BM_trials_parallel(benchmark::State& state) {
    const SimConfig c = trial_config();
    omp_set_num_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(run_trials(c));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.trials));
}

void BM_tail_serial(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(tail_hits_serial(Objective::Perimeter, 3, 0.0, 0.5, tail_draws, 1));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tail_draws));
}

void BM_tail_parallel(benchmark::State& state) {
    omp_set_num_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(tail_hits(Objective::Perimeter, 3, 0.0, 0.5, tail_draws, 1));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tail_draws));
}

}  // namespace

BENCHMARK(BM_trials_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_trials_parallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_tail_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_tail_parallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
