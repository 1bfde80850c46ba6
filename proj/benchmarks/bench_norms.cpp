#include <benchmark/benchmark.h>

#include <vector>

#include "wavedamp/norms.hpp"

using namespace wavedamp;

namespace {

void bench_sobolev_norm(benchmark::State& state) {
    DataProfile data;
    data.nodes = static_cast<int>(state.range(0));
    const auto r = data.r_grid();
    std::vector<double> field(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) field[i] = data.u0_hat(r[i]);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sobolev_norm(r, field, 3, 2.0));
    }
}
BENCHMARK(bench_sobolev_norm)->Arg(160)->Arg(320)->Arg(640);

void bench_ratio_series(benchmark::State& state) {
    const int n = 512;
    std::vector<double> t(n), norms(n), env(n);
    for (int i = 0; i < n; ++i) {
        t[i] = 1.0 + i;
        env[i] = 1.0 / (1.0 + i);
        norms[i] = 0.7 * env[i];
    }
    for (auto _ : state) {
        const RatioStats s = ratio_series(t, norms, env);
        benchmark::DoNotOptimize(s.sup);
    }
}
BENCHMARK(bench_ratio_series);

} // namespace

BENCHMARK_MAIN();
