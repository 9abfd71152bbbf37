// Serial reference kernels against their OpenMP counterparts.
//
//   arena_bench [--benchmark_filter=...]
//
// The second argument of every benchmark selects the execution policy:
// 0 = serial, 1 = OpenMP parallel.

#include "arena/bench.hpp"
#include "arena/explicit_game.hpp"
#include "arena/sim.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace arena;

namespace {

sim::Exec policy(const benchmark::State& state) { return state.range(1) ? sim::Exec::Parallel : sim::Exec::Serial; }

void BM_Simulate(benchmark::State& state)
{
    const auto g = bench::gen_mux_arbiter(8);
    const sim::Simulator s(g.circuit);
    std::mt19937_64 rng(1);
    sim::Batch batch;
    batch.words = static_cast<std::size_t>(state.range(0));
    batch.inputs.resize(batch.words * g.circuit.inputs.size());
    batch.latches.resize(batch.words * g.circuit.latches.size());
    for (auto& w : batch.inputs)
        w = rng();
    for (auto& w : batch.latches)
        w = rng();
    for (auto _ : state)
        benchmark::DoNotOptimize(sim::simulate(s, batch, policy(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 64);
}

// Specifications with 12 to 20 state and input bits.
aiger::Aig table_spec(std::int64_t which)
{
    switch (which) {
    case 0: return bench::gen_counter_race(14).circuit;
    case 1: return bench::gen_mux_arbiter(4).circuit;
    default: return bench::gen_forced_overflow(10).circuit;
    }
}

void BM_Tabulate(benchmark::State& state)
{
    const auto a = table_spec(state.range(0));
    const auto p = aiger::classify_inputs(a);
    for (auto _ : state)
        benchmark::DoNotOptimize(explicit_game::tabulate(a, p, policy(state)));
}

void BM_ExplicitSolve(benchmark::State& state)
{
    const auto a = table_spec(state.range(0));
    const auto t = explicit_game::tabulate(a, aiger::classify_inputs(a), sim::Exec::Serial);
    for (auto _ : state)
        benchmark::DoNotOptimize(explicit_game::solve(t, policy(state)));
}

} // namespace

BENCHMARK(BM_Simulate)->ArgsProduct({{1 << 8, 1 << 12, 1 << 14}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Tabulate)->ArgsProduct({{0, 1, 2}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExplicitSolve)->ArgsProduct({{0, 1, 2}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
