#include <benchmark/benchmark.h>

#include <cmath>

#include "wavedamp/profile.hpp"
#include "wavedamp/quadrature.hpp"

using namespace wavedamp;

namespace {

void bench_adaptive_simpson(benchmark::State& state) {
    for (auto _ : state) {
        const auto r = integrate([](double t) { return std::exp(-t) * std::cos(3.0 * t); },
                                 0.0, 20.0, 1e-10);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(bench_adaptive_simpson);

void bench_cumulative_cache_cold(benchmark::State& state) {
    for (auto _ : state) {
        CumulativeIntegral F([](double t) { return std::exp(std::sin(t)); }, 1e-10, 0.25);
        benchmark::DoNotOptimize(F(25.0));
    }
}
BENCHMARK(bench_cumulative_cache_cold);

void bench_cumulative_cache_warm(benchmark::State& state) {
    CumulativeIntegral F([](double t) { return std::exp(std::sin(t)); }, 1e-10, 0.25);
    benchmark::DoNotOptimize(F(25.0));
    double t = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(F(t));
        t += 0.37;
        if (t > 24.0) t = 0.1;
    }
}
BENCHMARK(bench_cumulative_cache_warm);

void bench_doubleexp_primitive(benchmark::State& state) {
    const Profile g = make_profile("doubleexp", {{"c", 0.5}, {"sign", -1.0}});
    double t = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(g.primitive(t));
        t += 0.173;
        if (t > 6.0) t = 0.1;
    }
}
BENCHMARK(bench_doubleexp_primitive);

} // namespace
