#include "ensel/copula.hpp"
#include "ensel/information.hpp"
#include "ensel/numerics.hpp"
#include "ensel/rng.hpp"
#include "ensel/selection.hpp"

#include <benchmark/benchmark.h>

using namespace ensel;

namespace {

void BM_BivariateNormalCdf(benchmark::State& state) {
    const double rho = static_cast<double>(state.range(0)) / 100.0;
    double x = -1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bivariate_normal_cdf(x, 0.3, rho));
        x = x > 1.0 ? -1.0 : x + 1e-3;
    }
}
BENCHMARK(BM_BivariateNormalCdf)->Arg(10)->Arg(50)->Arg(95);

void BM_SmoothedMi(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    std::vector<std::uint64_t> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = rng.bounded(2);
        b[i] = rng.bounded(64);
    }
    const auto sa = make_sequence(a, 2), sb = make_sequence(b, 64);
    for (auto _ : state) benchmark::DoNotOptimize(smoothed_mi(sa, sb, 1.0));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SmoothedMi)->Arg(10000)->Arg(100000);

void BM_GreedySelect(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const Dataset d = sample_equicorrelated({m, 0.3, 0.75}, 20000, 2);
    for (auto _ : state) benchmark::DoNotOptimize(greedy_mi_select(d, std::min<std::size_t>(m, 8)));
}
BENCHMARK(BM_GreedySelect)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SampleCopula(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const CopulaModel model = equicorrelated_model({m, 0.4, 0.8});
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sample(model, 10000, ++seed));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_SampleCopula)->Arg(5)->Arg(25)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
