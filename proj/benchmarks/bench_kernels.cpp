#include "fptqv/inverse_fpt.hpp"
#include "fptqv/specfun.hpp"
#include "fptqv/time_change.hpp"
#include "fptqv/wiener_one_sided.hpp"
#include "fptqv/wiener_two_sided.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace fptqv;

namespace {
const OneSidedBoundary unit(1.0);
const TwoSidedBoundary sym(1.0, -1.0);
}

static void BM_erfinv_central(benchmark::State& state) {
    double p = 0.12345;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::erfinv(p));
        p = p < 0.8 ? p + 1e-9 : 0.12345;
    }
}
BENCHMARK(BM_erfinv_central);

static void BM_erfinv_tail(benchmark::State& state) {
    double p = 1.0 - 1e-10;
    for (auto _ : state) benchmark::DoNotOptimize(specfun::erfinv(p));
}
BENCHMARK(BM_erfinv_tail);

static void BM_erfcinv_deep_tail(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(specfun::erfcinv(1e-280));
}
BENCHMARK(BM_erfcinv_deep_tail);

static void BM_levy_cdf(benchmark::State& state) {
    double t = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(levy_cdf(unit, t));
        t = t < 40.0 ? t + 1e-6 : 0.5;
    }
}
BENCHMARK(BM_levy_cdf);

static void BM_levy_cdf_inverse(benchmark::State& state) {
    double p = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(levy_cdf_inverse(unit, p));
        p = p < 0.99 ? p + 1e-7 : 0.01;
    }
}
BENCHMARK(BM_levy_cdf_inverse);

static void BM_two_sided_cdf(benchmark::State& state) {
    const double t = static_cast<double>(state.range(0)) / 4.0;
    for (auto _ : state) benchmark::DoNotOptimize(two_sided_cdf(sym, t));
}
BENCHMARK(BM_two_sided_cdf)->Arg(1)->Arg(4)->Arg(64)->Arg(1024);

static void BM_two_sided_pdf(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(two_sided_pdf(sym, 1.0));
}
BENCHMARK(BM_two_sided_pdf);

static void BM_two_sided_cdf_inverse(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(two_sided_cdf_inverse(sym, 0.5));
}
BENCHMARK(BM_two_sided_cdf_inverse);

static void BM_grid_clock_eval(benchmark::State& state) {
    std::vector<double> t{0.0}, v{0.0};
    for (int i = 1; i <= 1024; ++i) {
        t.push_back(i * 0.01);
        v.push_back(v.back() + (i % 7) * 0.003);
    }
    const auto clock = QuadraticVariationPath::from_grid(t, v);
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(clock.value(x));
        x = x < 10.0 ? x + 1e-4 : 0.0;
    }
}
BENCHMARK(BM_grid_clock_eval);

static void BM_qv_solution_one_sided(benchmark::State& state) {
    const int knots = static_cast<int>(state.range(0));
    std::vector<double> t(knots), F(knots);
    for (int i = 0; i < knots; ++i) {
        t[i] = 10.0 * i / (knots - 1);
        F[i] = levy_cdf(unit, t[i]);
    }
    const auto target = SurvivalCdf::from_knots(t, F);
    for (auto _ : state) benchmark::DoNotOptimize(qv_solution_one_sided(target, unit));
    state.SetItemsProcessed(state.iterations() * knots);
}
BENCHMARK(BM_qv_solution_one_sided)->Arg(512)->Arg(8192);

BENCHMARK_MAIN();
