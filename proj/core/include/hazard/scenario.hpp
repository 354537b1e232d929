#pragma once

#include <cstddef>
#include <cstdint>
#include <type_traits>
#include <span>
#include <vector>

#include "hazard/model.hpp"
#include "hazard/parallel.hpp"
#include "hazard/pricing.hpp"
#include "hazard/rng.hpp"

namespace hazard {

/// Where the default-time uniform comes from.
enum class SamplerWiring {
    /// Its own substream, independent of the Gaussian increments.
    independent,
    /// Fault injection: u = Phi(W(T)/sqrt(T)), i.e. recycled from the
    /// Gaussian stream. Breaks the conditional-survival identity on purpose.
    reuse_gaussian,
};

struct ScenarioOptions {
    /// Grid indices at which c and d are evaluated; empty means every node.
    /// Node 0 and the terminal node are always added.
    std::vector<std::size_t> observe;
    /// Pre-default value; empty means the closed form of the model.
    PreDefaultFn pre_default;
    SamplerWiring wiring = SamplerWiring::independent;
};

/// Sorted, de-duplicated grid indices for `times`, plus 0 and the last node.
/// Throws DomainError for a time that is not a grid node.
std::vector<std::size_t> observation_nodes(const TimeGrid& grid, std::span<const double> times);

/// Simulates W, S, gamma_plus, G and tau under the constructed measure and
/// fills c and d = c 1{t < tau} on the observed nodes.
Scenario make_scenario(const RngStream& rng, const ModelParams& p, const TimeGrid& grid,
                       const ScenarioOptions& opts = {});

/// Everything that determines a batch of scenarios.
struct SimulationSetup {
    ModelParams params{};
    std::size_t steps = 2000;
    std::size_t n = 100000;
    std::uint64_t seed = 7;
    Parallelism parallel{};
    PreDefaultFn pre_default;
    SamplerWiring wiring = SamplerWiring::independent;

    TimeGrid grid() const { return TimeGrid(params.T, steps); }
};

/// Generates scenario k from RngStream{seed}.child(k) for k < setup.n, with c
/// observed at `times`, and returns fn(scenario, k) in index order.
/// Scenarios are built and dropped one at a time per worker.
template <class Fn>
auto map_scenarios(const SimulationSetup& setup, std::span<const double> times, Fn&& fn)
{
    using R = std::invoke_result_t<Fn&, const Scenario&, std::size_t>;
    const TimeGrid grid = setup.grid();
    ScenarioOptions opts{observation_nodes(grid, times), setup.pre_default, setup.wiring};
    const RngStream root{setup.seed, 0};
    return parallel_map<R>(setup.n, setup.parallel.workers, [&](std::size_t k) {
        const Scenario sc = make_scenario(root.child(k), setup.params, grid, opts);
        return fn(sc, k);
    });
}

}  // namespace hazard
