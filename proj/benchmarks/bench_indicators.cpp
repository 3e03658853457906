#include <benchmark/benchmark.h>

#include "lca/indicators.hpp"
#include "synthetic.hpp"

namespace {

void BM_Context(benchmark::State &state) {
    const auto snapshot = lca::bench::synthetic_catalog(static_cast<std::size_t>(state.range(0)), 40);
    for (auto _ : state) {
        const lca::IndicatorContext context(snapshot);
        benchmark::DoNotOptimize(context.libcitations_at(0));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Context)->RangeMultiplier(4)->Range(1024, 65536)->Complexity();

void BM_AuthorRanking(benchmark::State &state) {
    const auto snapshot = lca::bench::synthetic_catalog(4000, 40);
    for (auto _ : state) {
        const lca::IndicatorContext context(snapshot);
        benchmark::DoNotOptimize(context.author_ranking());
    }
}
BENCHMARK(BM_AuthorRanking);

void BM_DiffusionRate(benchmark::State &state) {
    const auto snapshot = lca::bench::synthetic_catalog(20000, 42);
    const auto unit = lca::whole_database_unit(snapshot);
    for (auto _ : state)
        benchmark::DoNotOptimize(lca::diffusion_rate(unit, snapshot));
}
BENCHMARK(BM_DiffusionRate);

void BM_Cnls(benchmark::State &state) {
    const auto snapshot = lca::bench::synthetic_catalog(4000, 40);
    const lca::IndicatorContext context(snapshot);
    for (auto _ : state)
        benchmark::DoNotOptimize(context.cnls("r17"));
}
BENCHMARK(BM_Cnls);

} // namespace
