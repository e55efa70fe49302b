#include <benchmark/benchmark.h>

#include "randkit/bell.hpp"
#include "randkit/borel.hpp"
#include "randkit/lz.hpp"
#include "randkit/measures.hpp"
#include "randkit/sources.hpp"

namespace {

using namespace randkit;

Key256 bench_key() {
    Key256 k{};
    k.fill(0x5A);
    return k;
}

void BM_Chacha20Bits(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(chacha20_bits(bench_key(), n));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Chacha20Bits)->Arg(4096)->Arg(20000)->Arg(90000);

void BM_LzParse(benchmark::State& state) {
    const BitString s = chacha20_bits(bench_key(), static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(lz_parse(s));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LzParse)->Arg(4096)->Arg(20000)->Arg(90000);

void BM_BorelMeasure(benchmark::State& state) {
    const BitString s = chacha20_bits(bench_key(), static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(borel_measure(s));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BorelMeasure)->Arg(4096)->Arg(20000)->Arg(90000);

void BM_MeasureSuite(benchmark::State& state) {
    const BitString s = chacha20_bits(bench_key(), static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(measure_suite(s));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MeasureSuite)->Arg(4096)->Arg(20000)->Arg(90000);

void BM_MimicTwoByte(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(mimic_two_byte(bench_key(), 0.4851, n));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MimicTwoByte)->Arg(20000);

void BM_BellQuantumEvents(benchmark::State& state) {
    const auto pairs = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            bell_quantum_events(bench_key(), pairs, singlet_correlations(), TimingParams{}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BellQuantumEvents)->Arg(20000);

void BM_MatchCoincidences(benchmark::State& state) {
    TimingParams timing;
    timing.jitter_sigma_ns = 100.0;
    timing.efficiency_a = 0.95;
    timing.efficiency_b = 0.95;
    const EventPairStreams ev = bell_quantum_events(
        bench_key(), static_cast<std::size_t>(state.range(0)), singlet_correlations(), timing);
    for (auto _ : state)
        benchmark::DoNotOptimize(match_coincidences(ev.alice, ev.bob, 1000, 0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MatchCoincidences)->Arg(20000);

} // namespace

BENCHMARK_MAIN();
