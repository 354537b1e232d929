#include "hazard/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hazard/engine.hpp"
#include "hazard/special.hpp"

namespace hazard {

std::vector<std::size_t> observation_nodes(const TimeGrid& grid, std::span<const double> times)
{
    std::vector<std::size_t> idx{0, grid.steps()};
    for (double t : times)
        idx.push_back(grid.require_index(t));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

Scenario make_scenario(const RngStream& rng, const ModelParams& p, const TimeGrid& grid,
                       const ScenarioOptions& opts)
{
    BrownianPath w = simulate_brownian(grid, rng);
    std::vector<double> s = stock_path(w, p);
    SurvivalPath survival = survival_path(w, p);
    Scenario sc{std::move(w), DefaultTime::beyond_horizon(), std::move(s), std::move(survival), {}, {}, {}};

    double u = 0.0;
    if (opts.wiring == SamplerWiring::independent) {
        auto gen = rng.engine(RngStream::kDefault);
        u = gen.uniform();
    } else {
        const double z = sc.w.w.back() / std::sqrt(grid.horizon());
        u = std::clamp(norm_cdf(z), 0x1.0p-53, 1.0 - 0x1.0p-53);
    }
    sc.tau = sample_default_time(sc.survival, u);

    if (opts.observe.empty()) {
        sc.observed.resize(grid.size());
        std::iota(sc.observed.begin(), sc.observed.end(), std::size_t{0});
    } else {
        sc.observed = opts.observe;
        sc.observed.push_back(0);
        sc.observed.push_back(grid.steps());
        std::sort(sc.observed.begin(), sc.observed.end());
        sc.observed.erase(std::unique(sc.observed.begin(), sc.observed.end()), sc.observed.end());
    }

    sc.c.resize(sc.observed.size());
    sc.d.resize(sc.observed.size());
    for (std::size_t k = 0; k < sc.observed.size(); ++k) {
        const std::size_t i = sc.observed[k];
        const double t = grid.time(i);
        const double w = sc.w.w[i];
        sc.c[k] = opts.pre_default ? opts.pre_default(t, w) : pre_default_value(t, w, p);
        sc.d[k] = sc.tau.survives(t) ? sc.c[k] : 0.0;
    }
    return sc;
}

}  // namespace hazard
