#include <benchmark/benchmark.h>

#include <random>

#include "striae/align.hpp"

using namespace striae;

namespace {

Signature noise_signature(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    SourceMeta meta;
    meta.tool_id = static_cast<int>(seed % 97 + 1);
    return make_signature(std::move(v), 3.45, meta);
}

void BM_align_pair(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Signature a = noise_signature(1, n);
    const Signature b = noise_signature(2, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(align(a, b));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_align_pair)->Arg(256)->Arg(512)->Arg(1024)->Arg(1739)->Complexity();

void BM_align_short_vs_long(benchmark::State& state) {
    const Signature a = noise_signature(3, 1739);
    const Signature b = noise_signature(4, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(align(a, b));
    }
}
BENCHMARK(BM_align_short_vs_long)->Arg(145)->Arg(290)->Arg(580);

void BM_similarity_matrix(benchmark::State& state) {
    std::vector<Signature> sigs;
    const auto count = static_cast<std::size_t>(state.range(0));
    for (std::size_t i = 0; i < count; ++i) sigs.push_back(noise_signature(10 + i, 580));
    for (auto _ : state) {
        benchmark::DoNotOptimize(similarity_matrix(sigs));
    }
}
BENCHMARK(BM_similarity_matrix)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

} // namespace
