#include <random>

#include <benchmark/benchmark.h>

#include "lca/stats.hpp"

namespace {

void BM_Spearman(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> value(0, 50);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = value(rng);
        y[i] = x[i] + value(rng);
    }
    const lca::PairedSample sample(x, y);
    for (auto _ : state)
        benchmark::DoNotOptimize(lca::spearman(sample));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Spearman)->RangeMultiplier(8)->Range(64, 262144)->Complexity(benchmark::oNLogN);

} // namespace
