// Serial reference kernels against their OpenMP counterparts.
#include "iavs/diagnostics.hpp"
#include "iavs/kernels.hpp"
#include "iavs/rng.hpp"
#include "iavs/synthetic.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

std::vector<double> ar1_series(std::size_t n) {
    auto rng = iavs::make_rng(11, 0);
    std::normal_distribution<double> z;
    std::vector<double> x(n);
    double prev = 0.0;
    for (auto &v : x) {
        prev = 0.9 * prev + z(rng);
        v = prev;
    }
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= static_cast<double>(n);
    for (auto &v : x)
        v -= mean;
    return x;
}

iavs::Dataset bench_data(std::size_t n, std::size_t p) {
    iavs::SyntheticSpec spec;
    spec.n = n;
    spec.p = p;
    spec.signals = 3;
    spec.seed = 5;
    return iavs::generate_synthetic(spec).dataset();
}

void BM_AutocovSerial(benchmark::State &state) {
    const auto x = ar1_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        for (std::size_t lag = 0; lag < 50; ++lag)
            benchmark::DoNotOptimize(iavs::kernels::serial::autocovariance(x, lag));
}

void BM_AutocovParallel(benchmark::State &state) {
    const auto x = ar1_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        for (std::size_t lag = 0; lag < 50; ++lag)
            benchmark::DoNotOptimize(iavs::kernels::autocovariance(x, lag));
}

void BM_CrossProductSerial(benchmark::State &state) {
    const auto d = bench_data(60, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(iavs::kernels::serial::cross_product(d.X, d.y));
}

void BM_CrossProductParallel(benchmark::State &state) {
    const auto d = bench_data(60, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(iavs::kernels::cross_product(d.X, d.y));
}

void BM_EnumerateSerial(benchmark::State &state) {
    const auto d = bench_data(60, static_cast<std::size_t>(state.range(0)));
    const iavs::PriorSpec prior{iavs::RidgePrior{100.0}, iavs::FixedInclusion{0.25}};
    for (auto _ : state)
        benchmark::DoNotOptimize(iavs::enumerate_posterior_serial(d, prior));
}

void BM_EnumerateParallel(benchmark::State &state) {
    const auto d = bench_data(60, static_cast<std::size_t>(state.range(0)));
    const iavs::PriorSpec prior{iavs::RidgePrior{100.0}, iavs::FixedInclusion{0.25}};
    for (auto _ : state)
        benchmark::DoNotOptimize(iavs::enumerate_posterior(d, prior));
}

} // namespace

BENCHMARK(BM_AutocovSerial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_AutocovParallel)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_CrossProductSerial)->Arg(1000)->Arg(20000);
BENCHMARK(BM_CrossProductParallel)->Arg(1000)->Arg(20000);
BENCHMARK(BM_EnumerateSerial)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateParallel)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
