#include <benchmark/benchmark.h>

#include "stab3/cohomology.hpp"

namespace {

void BM_WedgeTopProduct(benchmark::State& state)
{
    using namespace stab3;
    const auto c12 = cycle_class(CycleName::C12);
    const auto d3 = cycle_class(CycleName::D3);
    for (auto _ : state) {
        auto w = wedge(c12, d3);
        benchmark::DoNotOptimize(integrate(w));
    }
}
BENCHMARK(BM_WedgeTopProduct);

} // namespace

BENCHMARK_MAIN();
