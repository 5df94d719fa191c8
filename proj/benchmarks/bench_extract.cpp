#include <benchmark/benchmark.h>

#include <random>

#include "striae/extract.hpp"

using namespace striae;

namespace {

Profile noisy_profile(std::size_t n) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> dist(0.0, 1.0);
    Profile p;
    p.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 2.0 * static_cast<double>(i) / static_cast<double>(n - 1) - 1.0;
        p.values[i] = dist(rng) + 12.0 * u * u;
    }
    p.pitch_um = 3.45;
    return p;
}

void BM_smooth_local_regression(benchmark::State& state) {
    const Profile p = noisy_profile(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(smooth_local_regression(p, 0.75));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_smooth_local_regression)->Arg(256)->Arg(580)->Arg(1024)->Arg(1739)->
    Unit(benchmark::kMillisecond)->Complexity();

void BM_extract_signature(benchmark::State& state) {
    const Profile p = noisy_profile(1739);
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_signature(p, 0.75));
    }
}
BENCHMARK(BM_extract_signature)->Unit(benchmark::kMillisecond);

} // namespace
