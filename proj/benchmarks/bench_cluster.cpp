#include <benchmark/benchmark.h>

#include <random>

#include "striae/cluster.hpp"

using namespace striae;

namespace {

// blocky dissimilarities: n_sources groups with tight within-group distances
SquareMatrix grouped_dissimilarity(std::size_t n, std::size_t n_groups) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> within(0.05, 0.2), between(0.5, 0.9);
    SquareMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool same = (i % n_groups) == (j % n_groups);
            const double v = same ? within(rng) : between(rng);
            d.at(i, j) = v;
            d.at(j, i) = v;
        }
    }
    return d;
}

void BM_pam(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    const SquareMatrix d = grouped_dissimilarity(n, static_cast<std::size_t>(k));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pam(d, k));
    }
}
BENCHMARK(BM_pam)->Args({64, 8})->Args({160, 20})->Args({320, 40})->
    Unit(benchmark::kMillisecond);

void BM_select_k(benchmark::State& state) {
    const SquareMatrix d = grouped_dissimilarity(96, 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(select_k(d, 2, 20));
    }
}
BENCHMARK(BM_select_k)->Unit(benchmark::kMillisecond);

} // namespace
