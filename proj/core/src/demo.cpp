#include "hazard/demo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "hazard/pricing.hpp"
#include "hazard/scenario.hpp"
#include "hazard/special.hpp"
#include "hazard/strategy.hpp"

namespace hazard {

std::optional<BrokenModel> parse_broken_model(std::string_view name)
{
    if (name == "none")
        return BrokenModel::none;
    if (name == "decreasing_c")
        return BrokenModel::decreasing_c;
    if (name == "postdefault_value")
        return BrokenModel::postdefault_value;
    if (name == "range_violation")
        return BrokenModel::range_violation;
    return std::nullopt;
}

std::string to_string(BrokenModel m)
{
    switch (m) {
    case BrokenModel::none:
        return "none";
    case BrokenModel::decreasing_c:
        return "decreasing_c";
    case BrokenModel::postdefault_value:
        return "postdefault_value";
    case BrokenModel::range_violation:
        return "range_violation";
    }
    return "unknown";
}

ModelParams broken_base(const ModelParams& p)
{
    ModelParams b = p;
    b.r = 0.0;
    const double lambda = 0.5 * (p.lambda_plus + p.lambda_minus);
    b.lambda_plus = lambda;
    b.lambda_minus = lambda;
    return b;
}

namespace {

// One strategy run over the scenarios: the value path on the observed nodes.
using Runner = std::function<std::vector<double>(const Scenario&)>;

DemoOutcome simulate(const DemoSetup& setup, const ModelParams& params, PreDefaultFn pre_default,
                     const std::vector<double>& times, const Runner& run)
{
    SimulationSetup sim{params, setup.steps, setup.n, setup.seed, setup.parallel, std::move(pre_default),
                        SamplerWiring::independent};
    struct Row {
        double initial;
        double terminal;
        std::vector<double> path;
    };
    const auto rows = map_scenarios(sim, times, [&](const Scenario& sc, std::size_t k) {
        std::vector<double> v = run(sc);
        Row row{v.front(), v.back(), {}};
        if (k < setup.record)
            row.path = std::move(v);
        return row;
    });

    DemoOutcome out;
    out.n = rows.size();
    out.min_terminal = std::numeric_limits<double>::infinity();
    std::vector<double> terminal(rows.size());
    std::size_t positive = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out.max_abs_initial = std::max(out.max_abs_initial, std::abs(rows[k].initial));
        out.min_terminal = std::min(out.min_terminal, rows[k].terminal);
        terminal[k] = rows[k].terminal;
        if (rows[k].terminal > 0.0)
            ++positive;
        if (!rows[k].path.empty())
            out.record_values.push_back(rows[k].path);
    }
    out.terminal = batch_means(terminal);
    out.fraction_positive = rows.empty() ? 0.0 : static_cast<double>(positive) / static_cast<double>(rows.size());

    const TimeGrid grid = sim.grid();
    for (std::size_t i : observation_nodes(grid, times))
        out.record_times.push_back(grid.time(i));
    return out;
}

DemoOutcome theorem_demo(const DemoSetup& setup, const ModelParams& params, PreDefaultFn candidate)
{
    const double t1 = 0.25 * params.T;
    const double t2 = 0.75 * params.T;
    const TheoremArbitrage arb = build_theorem_arbitrage(t1, t2, params, candidate);
    DemoOutcome out = simulate(setup, params, candidate, {t1, t2},
                               [&](const Scenario& sc) { return value_process(arb.strategy, sc, params); });
    out.strategy = arb.strategy.name;
    return out;
}

DemoOutcome detector_demo(const DemoSetup& setup, const ModelParams& params, PreDefaultFn pre_default,
                          const BDSimpleStrategy& detector, double t, BondPriceFn price)
{
    DemoOutcome out = simulate(setup, params, std::move(pre_default), {t},
                               [&](const Scenario& sc) { return bd_value_process(detector, sc, params, price); });
    out.strategy = detector.name;
    return out;
}

}  // namespace

std::vector<DemoOutcome> run_demo(BrokenModel model, const DemoSetup& setup)
{
    validate_params(setup.params);
    std::vector<DemoOutcome> outcomes;
    const double T = setup.params.T;
    const double t_mid = 0.5 * T;

    if (model == BrokenModel::none) {
        const ModelParams& p = setup.params;
        const PreDefaultFn c = closed_form_pricer(p);
        outcomes.push_back(theorem_demo(setup, p, c));
        outcomes.back().description = "theorem arbitrage on the model's own c";
        outcomes.push_back(detector_demo(setup, p, c, build_postdefault_detector(t_mid, p), t_mid, {}));
        outcomes.back().description = "post-default detector on the model's D";
        outcomes.push_back(detector_demo(setup, p, c, build_range_detector(t_mid, p), t_mid, {}));
        outcomes.back().description = "range detector on the model's c";
        for (auto& o : outcomes) {
            o.expected_fraction = 0.0;
            o.expected_mean = 0.0;
        }
        return outcomes;
    }

    const ModelParams base = broken_base(setup.params);
    const double lambda = base.lambda_plus;
    const PreDefaultFn flat = [base](double t, double) { return std::exp(-base.lambda_plus * (base.T - t)); };

    if (model == BrokenModel::decreasing_c) {
        const double t1 = 0.25 * T;
        const double t2 = 0.75 * T;
        const PreDefaultFn c = [t1, t2, T](double t, double) {
            return t >= T - 1e-12 ? 1.0 : 0.9 - 0.1 * (t - t1) / (t2 - t1);
        };
        DemoOutcome out = theorem_demo(setup, base, c);
        out.description = "deterministic c with c(T/4) = 0.9 and c(3T/4) = 0.8";
        const double alive1 = std::exp(-lambda * t1);
        const double alive2 = std::exp(-lambda * t2);
        out.expected_fraction = alive1;
        out.expected_mean = 0.8 * (alive1 - alive2) + 0.1 * alive1;
        outcomes.push_back(std::move(out));
    } else if (model == BrokenModel::postdefault_value) {
        const std::size_t idx = TimeGrid(T, setup.steps).require_index(t_mid);
        DemoOutcome out = detector_demo(setup, base, flat, build_postdefault_detector(t_mid, base), t_mid,
                                        postdefault_fault(idx, setup.epsilon));
        out.description = "D(T/2) carries +epsilon after default";
        const double dead = 1.0 - std::exp(-lambda * t_mid);
        out.expected_fraction = dead;
        out.expected_mean = std::abs(setup.epsilon) * dead;
        outcomes.push_back(std::move(out));
    } else {
        const PreDefaultFn c = [flat, t_mid](double t, double w) {
            return std::abs(t - t_mid) < 1e-12 && w > 1.0 ? 1.2 : flat(t, w);
        };
        DemoOutcome out = detector_demo(setup, base, c, build_range_detector(t_mid, base), t_mid, {});
        out.description = "c(T/2) = 1.2 on {W(T/2) > 1}";
        const double high = 1.0 - norm_cdf(1.0 / std::sqrt(t_mid));
        const double alive = std::exp(-lambda * t_mid);
        const double alive_t = std::exp(-lambda * T);
        out.expected_fraction = high * alive;
        out.expected_mean = high * (1.2 * (alive - alive_t) + 0.2 * alive_t);
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

}  // namespace hazard
