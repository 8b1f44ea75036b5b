#include <benchmark/benchmark.h>

#include <cmath>

#include "skln/quadrature.hpp"
#include "skln/rootfind.hpp"
#include "skln/solver.hpp"
#include "skln/verification.hpp"

using namespace skln;

static void BM_T_of_p(benchmark::State& state) {
    const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(T_of_p(0.7, 7, 2, tol).value);
}
BENCHMARK(BM_T_of_p)->Arg(8)->Arg(12)->Arg(14);

static void BM_solve_p_for_T(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(solve_p_for_T(1.0, 7, 2));
}
BENCHMARK(BM_solve_p_for_T);

static void BM_classify_case4(benchmark::State& state) {
    const auto spec = ProblemSpec::finite(7, 2, 1.0, 10.0, 1.0, 3.0);
    for (auto _ : state) benchmark::DoNotOptimize(classify(spec).p);
}
BENCHMARK(BM_classify_case4);

static void BM_build_profile(benchmark::State& state) {
    const auto spec = ProblemSpec::infinite(7, 2, 1.0, 10.0);
    const auto regime = classify(spec);
    GridControl grid;
    grid.points_per_branch = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_profile(spec, regime, grid).size());
}
BENCHMARK(BM_build_profile)->Arg(201)->Arg(2001)->Unit(benchmark::kMillisecond);

static void BM_audit(benchmark::State& state) {
    const auto spec = ProblemSpec::infinite(7, 2, 1.0, 10.0);
    const auto profile = build_profile(spec, classify(spec));
    for (auto _ : state) benchmark::DoNotOptimize(audit(profile, spec).passed);
}
BENCHMARK(BM_audit)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
