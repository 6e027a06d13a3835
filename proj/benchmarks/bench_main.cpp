#include <benchmark/benchmark.h>

#include "pmcast/automaton.hpp"
#include "pmcast/engine.hpp"
#include "pmcast/forecasting.hpp"
#include "pmcast/markov.hpp"
#include "pmcast/pattern.hpp"
#include "pmcast/simulator.hpp"

using namespace pmcast;

namespace {

const Alphabet kAbc({"a", "b", "c"});

SymbolModel order_model(std::size_t order) {
    const auto seed = generate({train(EventStream::from_words(kAbc, "a b c a"), 0, 1.0), 20'000, 3, {}});
    return train(seed, order, 1.0);
}

void BM_Compile(benchmark::State& state) {
    const auto expr = parse_pattern("(a|c);(b|c)*;a;(b;c)*;b", kAbc);
    for (auto _ : state) benchmark::DoNotOptimize(compile(expr, kAbc));
}
BENCHMARK(BM_Compile);

void BM_WaitingTimes(benchmark::State& state) {
    const auto dfa = compile(parse_pattern("a;(b|c);c;b", kAbc), kAbc);
    const auto pmc = build_pmc(dfa, order_model(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(waiting_times(pmc, kDefaultHorizon));
    state.counters["pmc_states"] = static_cast<double>(pmc.size());
}
BENCHMARK(BM_WaitingTimes)->Arg(0)->Arg(1)->Arg(2)->Arg(3);

void BM_Engine(benchmark::State& state) {
    const auto model = order_model(1);
    const auto dfa = compile(parse_pattern("a;(b|c);c;b", kAbc), kAbc);
    const auto pmc = build_pmc(dfa, model);
    const auto wtt = waiting_times(pmc, kDefaultHorizon);
    const auto stream = generate({model, 100'000, 11, {}});
    for (auto _ : state) benchmark::DoNotOptimize(run(stream, dfa, pmc, wtt, 0.5));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(stream.size()));
}
BENCHMARK(BM_Engine)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
