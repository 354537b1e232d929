#include <benchmark/benchmark.h>

#include "hazard/engine.hpp"
#include "hazard/lattice.hpp"
#include "hazard/pricing.hpp"
#include "hazard/special.hpp"

namespace {

void BM_Erf(benchmark::State& state)
{
    double x = -4.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hazard::erf(x));
        x = x > 4.0 ? -4.0 : x + 1e-3;
    }
}
BENCHMARK(BM_Erf);

void BM_BesselI0(benchmark::State& state)
{
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hazard::bessel_i0(x));
        x = x > 30.0 ? 0.0 : x + 1e-2;
    }
}
BENCHMARK(BM_BesselI0);

void BM_SingularIntegral(benchmark::State& state)
{
    const double w = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(hazard::singular_integral(0.2, 0.5, 2.0, w, hazard::kPricingQuadrature));
}
BENCHMARK(BM_SingularIntegral)->Arg(0)->Arg(5)->Arg(20);

void BM_BondPrice(benchmark::State& state)
{
    const hazard::ModelParams p;
    for (auto _ : state)
        benchmark::DoNotOptimize(hazard::bond_price_0(p).value);
}
BENCHMARK(BM_BondPrice);

void BM_PreDefaultValue(benchmark::State& state)
{
    const hazard::ModelParams p;
    double w = -2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hazard::pre_default_value(0.7, w, p));
        w = w > 2.0 ? -2.0 : w + 0.01;
    }
}
BENCHMARK(BM_PreDefaultValue);

void BM_BrownianPath(benchmark::State& state)
{
    const hazard::TimeGrid grid(2.0, static_cast<std::size_t>(state.range(0)));
    std::uint64_t k = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(hazard::simulate_brownian(grid, hazard::RngStream{7, 0}.child(k++)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BrownianPath)->Arg(200)->Arg(2000);

void BM_LatticeFromModel(benchmark::State& state)
{
    const hazard::ModelParams p;
    for (auto _ : state)
        benchmark::DoNotOptimize(hazard::lattice_from_model(p, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_LatticeFromModel)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
