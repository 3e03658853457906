#include <benchmark/benchmark.h>

#include "lca/identifiers.hpp"
#include "synthetic.hpp"

namespace {

void BM_NormalizeIsbn13(benchmark::State &state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(lca::normalize_isbn("978-0-306-40615-7"));
}
BENCHMARK(BM_NormalizeIsbn13);

void BM_NormalizeIsbn10(benchmark::State &state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(lca::normalize_isbn("0-306-40615-2"));
}
BENCHMARK(BM_NormalizeIsbn10);

void BM_NormalizeHeading(benchmark::State &state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(lca::normalize_heading("Glänzel,  Wolfgang."));
}
BENCHMARK(BM_NormalizeHeading);

void BM_ClusterWorks(benchmark::State &state) {
    const auto snapshot = lca::bench::synthetic_catalog(static_cast<std::size_t>(state.range(0)), 20);
    for (auto _ : state)
        benchmark::DoNotOptimize(lca::cluster_works(snapshot));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClusterWorks)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

} // namespace
