#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "wavedamp/modes.hpp"

using namespace wavedamp;

namespace {

std::vector<double> grid(double t1, int n) {
    std::vector<double> ts(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) ts[static_cast<std::size_t>(i)] = t1 * i / n;
    return ts;
}

void bench_mode_oscillatory(benchmark::State& state) {
    const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    const auto ts = grid(10.0, 100);
    SolverOptions opts;
    opts.rel_tol = tol;
    for (auto _ : state) {
        const ModeSolution sol =
            solve_mode(Profile::zero(), Profile::zero(), 2.0, 1.0, 0.0, ts, opts);
        benchmark::DoNotOptimize(sol.u.back());
    }
}
BENCHMARK(bench_mode_oscillatory)->Arg(6)->Arg(8)->Arg(10);

void bench_mode_stiff_overdamping(benchmark::State& state) {
    // b = e^t reaches ~5e21 by t = 50; the L-stable pair keeps striding.
    const Profile b = make_profile("exp", {{"c", 1.0}, {"alpha", 1.0}});
    const Profile g = make_profile("exp", {{"c", 0.5}, {"alpha", -1.0}});
    const auto ts = grid(50.0, 100);
    SolverOptions opts;
    opts.rel_tol = 1e-10;
    for (auto _ : state) {
        const ModeSolution sol = solve_mode(b, g, 1.0, 1.0, 0.0, ts, opts);
        benchmark::DoNotOptimize(sol.u.back());
    }
}
BENCHMARK(bench_mode_stiff_overdamping);

void bench_mode_double_exponential(benchmark::State& state) {
    const Profile b = make_profile("doubleexp", {{"c", 1.0}, {"sign", 1.0}});
    const Profile g = make_profile("exp", {{"c", 2.0}, {"alpha", -1.0}});
    const auto ts = grid(3.0, 60);
    SolverOptions opts;
    opts.rel_tol = 1e-10;
    for (auto _ : state) {
        const ModeSolution sol = solve_mode(b, g, 1.0, 1.0, 0.0, ts, opts);
        benchmark::DoNotOptimize(sol.u.back());
    }
}
BENCHMARK(bench_mode_double_exponential);

void bench_fundamental_matrix(benchmark::State& state) {
    const Profile b = make_profile("power", {{"c", 0.5}, {"alpha", -1.0}});
    const Profile g = make_profile("exp", {{"c", 0.5}, {"alpha", -1.0}});
    const auto ts = grid(20.0, 50);
    SolverOptions opts;
    opts.rel_tol = 1e-10;
    for (auto _ : state) {
        const FundamentalMatrix fm = fundamental_matrix(b, g, 1.0, 0.0, ts, opts);
        benchmark::DoNotOptimize(fm.entries.back());
    }
}
BENCHMARK(bench_fundamental_matrix);

} // namespace
