#include "hazard/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "hazard/lattice.hpp"
#include "hazard/scenario.hpp"
#include "hazard/strategy.hpp"

namespace hazard::cli {

namespace {

SimulationSetup setup_from(const RunConfig& cfg, const PreDefaultFn& candidate = {})
{
    SimulationSetup s;
    s.params = cfg.params;
    s.steps = cfg.steps;
    s.n = cfg.n_paths;
    s.seed = cfg.seed;
    s.pre_default = candidate;
    return s;
}

// Grid node closest to fraction `f` of the horizon.
double node_at(const TimeGrid& grid, double f)
{
    const auto i = static_cast<std::size_t>(std::llround(f * static_cast<double>(grid.steps())));
    return grid.time(std::clamp<std::size_t>(i, 1, grid.steps() - 1));
}

Check flag(std::string name, double statistic, double threshold, bool passed)
{
    Check c;
    c.name = std::move(name);
    c.statistic = statistic;
    c.threshold = threshold;
    c.passed = passed;
    return c;
}

TestReport suite_martingales(const RunConfig& cfg, const PreDefaultFn& candidate)
{
    const SimulationSetup setup = setup_from(cfg, candidate);
    const TimeGrid grid = setup.grid();
    const double t1 = node_at(grid, 0.5);
    const double t2 = cfg.params.T;

    TestReport report;
    const auto with_default = standard_events(grid, t1, true);
    const auto brownian = standard_events(grid, t1, false);
    const MartingaleProcess q[] = {MartingaleProcess::discounted_stock, MartingaleProcess::discounted_bond};
    report.append(verify_martingale(q, t1, t2, with_default, setup));
    const MartingaleProcess cg[] = {MartingaleProcess::discounted_cg};
    report.append(verify_martingale(cg, t1, t2, brownian, setup));

    const MartingaleProcess undiscounted[] = {MartingaleProcess::undiscounted_stock};
    report.checks.push_back(
        expect_failure("control.undiscounted_stock", verify_martingale(undiscounted, t1, t2, brownian, setup)));
    SimulationSetup miswired = setup;
    miswired.wiring = SamplerWiring::reuse_gaussian;
    report.checks.push_back(
        expect_failure("control.miswired_sampler", verify_conditional_survival(t1, miswired)));
    return report;
}

TestReport suite_submartingale(const RunConfig& cfg, const PreDefaultFn& candidate)
{
    const SimulationSetup setup = setup_from(cfg, candidate);
    const TimeGrid grid = setup.grid();
    const double a = node_at(grid, 0.25);
    const double b = node_at(grid, 0.5);
    const double c = node_at(grid, 0.75);
    const std::pair<double, double> pairs[] = {{a, b}, {b, c}};
    return verify_strict_submartingale(pairs, setup);
}

TestReport suite_identities(const RunConfig& cfg, const PreDefaultFn& candidate)
{
    const SimulationSetup setup = setup_from(cfg, candidate);
    const TimeGrid grid = setup.grid();
    const double T = cfg.params.T;
    const double q1 = node_at(grid, 0.25);
    const double mid = node_at(grid, 0.5);
    const double q3 = node_at(grid, 0.75);
    constexpr double inf = std::numeric_limits<double>::infinity();

    TestReport report;
    report.append(verify_q_identity(CylinderEvent::full_space(), 0.0, T, setup));
    const CylinderEvent positive{"w_mid_positive", {mid}, {{0.0, inf}}, std::nullopt};
    report.append(verify_q_identity(positive, q1, mid, setup));

    const CylinderEvent bands{"w_bands", {q1, q3}, {{0.0, 1.0}, {-1.0, 0.0}}, std::nullopt};
    report.append(verify_restriction(bands, setup));
    const CylinderEvent late{"w_terminal_negative", {T}, {{-inf, 0.0}}, std::nullopt};
    report.append(verify_restriction(late, setup));

    report.append(verify_conditional_survival(mid, setup));
    return report;
}

TestReport suite_decomposition(const RunConfig& cfg, const PreDefaultFn& candidate)
{
    constexpr std::size_t kSteps = 200;
    const ModelParams& p = cfg.params;
    auto [lat, c] = lattice_from_model(p, kSteps);
    if (candidate)
        c = sample_on_lattice(lat, candidate);

    TestReport report;
    const Decomposition dec = multiplicative_decompose(lat, c);
    const DecompositionReport rep = verify_decomposition(lat, c, dec);
    for (Check& ch : to_checks(rep, "decomposition.lattice200"))
        report.checks.push_back(std::move(ch));
    report.checks.push_back(flag("decomposition.lattice200.g_strict", rep.g_strict ? 0.0 : 1.0, 0.0, rep.g_strict));

    // Uniqueness: evaluating the node factors in reverse order changes nothing.
    std::vector<std::size_t> order(lat.index(kSteps, 0));
    for (std::size_t k = 0; k < order.size(); ++k)
        order[k] = order.size() - 1 - k;
    const Decomposition again = multiplicative_decompose(lat, c, order);
    double diff = 0.0;
    for (std::size_t k = 0; k < dec.step_factor.values.size(); ++k)
        diff = std::max(diff, std::abs(dec.step_factor.values[k] - again.step_factor.values[k]));
    report.checks.push_back(flag("decomposition.lattice200.order_independence", diff, 0.0, diff == 0.0));

    if (!candidate) {
        const SurvivalComparison cmp = lattice_survival_comparison(p, 50);
        const double last = cmp.levels.back().max_relative_deviation;
        report.checks.push_back(flag("decomposition.survival_refinement", last, cmp.levels.front().max_relative_deviation,
                                     cmp.decreasing));
        const auto [blat, bc] = lattice_backward_values(p, kSteps);
        const double gap = bc.at(blat, 0, 0) - pre_default_value(0.0, 0.0, p);
        report.checks.push_back(flag("decomposition.backward_root", gap, 2e-2, std::abs(gap) <= 2e-2));
    }
    return report;
}

TestReport suite_detectors(const RunConfig& cfg, const PreDefaultFn& candidate)
{
    constexpr double kFault = 1e-3;
    const SimulationSetup setup = setup_from(cfg, candidate);
    const TimeGrid grid = setup.grid();
    const ModelParams& p = cfg.params;
    const double t = node_at(grid, 0.5);
    const std::size_t idx = grid.require_index(t);
    const double times[] = {t};

    struct Summary {
        double max_abs = 0.0;
        double min_terminal = 0.0;
        std::size_t positive = 0;
    };
    auto summarise = [&](const SimulationSetup& s, const BDSimpleStrategy& det, const BondPriceFn& price) {
        const auto rows = map_scenarios(s, times, [&](const Scenario& sc, std::size_t) {
            const std::vector<double> v = bd_value_process(det, sc, p, price);
            double m = 0.0;
            for (double x : v)
                m = std::max(m, std::abs(x));
            return std::pair{m, v.back()};
        });
        Summary out{0.0, std::numeric_limits<double>::infinity(), 0};
        for (const auto& [m, terminal] : rows) {
            out.max_abs = std::max(out.max_abs, m);
            out.min_terminal = std::min(out.min_terminal, terminal);
            if (terminal > 0.0)
                ++out.positive;
        }
        return out;
    };

    TestReport report;
    const BDSimpleStrategy postdefault = build_postdefault_detector(t, p);
    const BDSimpleStrategy range = build_range_detector(t, p);

    const Summary clean_pd = summarise(setup, postdefault, {});
    report.checks.push_back(flag("detectors.postdefault.conforming_zero", clean_pd.max_abs, 0.0, clean_pd.max_abs == 0.0));
    const Summary clean_range = summarise(setup, range, {});
    report.checks.push_back(flag("detectors.range.conforming_zero", clean_range.max_abs, 0.0, clean_range.max_abs == 0.0));

    auto detected = [&](const std::string& name, const Summary& s) {
        const bool ok = s.positive > 0 && s.min_terminal >= -1e-10;
        report.checks.push_back(flag(name, static_cast<double>(s.positive), 0.0, ok));
    };
    detected("detectors.postdefault.fault_plus_1e-3", summarise(setup, postdefault, postdefault_fault(idx, kFault)));
    detected("detectors.postdefault.fault_minus_1e-3", summarise(setup, postdefault, postdefault_fault(idx, -kFault)));

    SimulationSetup high = setup;
    const PreDefaultFn base = candidate ? candidate : closed_form_pricer(p);
    high.pre_default = [base, t](double s, double w) {
        return std::abs(s - t) < 1e-12 && w > 1.0 ? 1.0 + kFault : base(s, w);
    };
    detected("detectors.range.fault_above_one_1e-3", summarise(high, range, {}));
    SimulationSetup low = setup;
    low.pre_default = [base, t](double s, double w) {
        return std::abs(s - t) < 1e-12 && w > 1.0 ? -kFault : base(s, w);
    };
    detected("detectors.range.fault_below_zero_1e-3", summarise(low, range, {}));
    return report;
}

TestReport suite_nqsa(const RunConfig& cfg, const PreDefaultFn& candidate)
{
    constexpr std::size_t kStrategies = 20;
    const SimulationSetup setup = setup_from(cfg, candidate);
    const ModelParams& p = cfg.params;

    std::vector<QuasiSimpleStrategy> strategies;
    for (std::size_t k = 0; k < kStrategies; ++k)
        strategies.push_back(random_strategy(cfg.seed, k, p));
    TestReport report{nqsa_battery(strategies, setup).checks};

    const TimeGrid grid = setup.grid();
    const double t1 = node_at(grid, 0.25);
    const double t2 = node_at(grid, 0.75);
    const TheoremArbitrage arb =
        build_theorem_arbitrage(t1, t2, p, candidate ? candidate : closed_form_pricer(p));
    const double times[] = {t1, t2};
    const auto terminal = map_scenarios(setup, times, [&](const Scenario& sc, std::size_t) {
        return run_strategy(arb.strategy, sc, p).terminal();
    });
    double worst = 0.0;
    for (double v : terminal)
        worst = std::max(worst, std::abs(v));
    report.checks.push_back(flag("nqsa.theorem_arbitrage.max_abs_terminal", worst, 1e-10, worst <= 1e-10));
    return report;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool open_output(std::ofstream& file, const std::filesystem::path& path, std::ostream& err)
{
    file.open(path, std::ios::out | std::ios::trunc);
    if (!file) {
        err << "error: cannot write " << path.string() << '\n';
        return false;
    }
    return true;
}

}  // namespace

PriceReport price_report(const RunConfig& cfg)
{
    validate_config(cfg);
    const SimulationSetup setup = setup_from(cfg);
    const double discount = std::exp(-cfg.params.r * cfg.params.T);
    const auto payoff = map_scenarios(setup, std::span<const double>{}, [&](const Scenario& sc, std::size_t) {
        return sc.tau.survives(cfg.params.T) ? discount : 0.0;
    });
    PriceReport r;
    r.closed_form = bond_price_0(cfg.params).value;
    r.monte_carlo = batch_means(payoff);
    r.delta = r.monte_carlo.mean - r.closed_form;
    r.consistent = std::abs(r.delta) <= 3.0 * r.monte_carlo.se;
    return r;
}

int cmd_price(const RunConfig& cfg, std::ostream& out)
{
    const PriceReport r = price_report(cfg);
    out << "closed form D(0,T)   " << format_double(r.closed_form) << '\n'
        << "monte carlo D(0,T)   " << format_double(r.monte_carlo.mean) << "  se " << format_double(r.monte_carlo.se)
        << "  n " << r.monte_carlo.n << '\n'
        << "delta                " << format_double(r.delta) << "  (" << format_double(r.delta / r.monte_carlo.se)
        << " se)\n"
        << (r.consistent ? "consistent within 3 se\n" : "INCONSISTENT: delta exceeds 3 se\n");
    return r.consistent ? kExitOk : kExitFailed;
}

std::vector<PathRow> sample_paths(const RunConfig& cfg, std::size_t count)
{
    validate_config(cfg);
    const ModelParams& p = cfg.params;
    const TimeGrid grid(p.T, cfg.steps);
    const RngStream root{cfg.seed, 0};
    std::vector<PathRow> rows;
    rows.reserve(count * grid.size());
    for (std::size_t k = 0; k < count; ++k) {
        const Scenario sc = make_scenario(root.child(k), p, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid.time(i);
            const auto [lo, hi] = envelope(t, p);
            const double w = sc.w.w[i];
            rows.push_back({k, t, w, sc.c_at(i), lo, hi, sc.survival.g[i], w >= 0.0 ? "plus" : "minus"});
        }
    }
    return rows;
}

int cmd_paths(const RunConfig& cfg, std::size_t count, const std::filesystem::path& out_path,
              std::ostream& out, std::ostream& err)
{
    if (count == 0) {
        err << "error: --count must be at least 1\n";
        return kExitUsage;
    }
    validate_config(cfg);
    std::ofstream file;
    if (!open_output(file, out_path, err))
        return kExitIo;
    const auto rows = sample_paths(cfg, count);
    write_paths_csv(file, rows);
    file.flush();
    if (!file) {
        err << "error: failed writing " << out_path.string() << '\n';
        return kExitIo;
    }
    out << "wrote " << rows.size() << " rows (" << count << " paths x " << cfg.steps + 1 << " nodes) to "
        << out_path.string() << '\n';
    return kExitOk;
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"martingales", "submartingale", "identities",
                                                "decomposition", "detectors", "nqsa"};
    return names;
}

std::vector<std::string> parse_suites(std::string_view list)
{
    const auto& all = suite_names();
    if (trim(list) == "all" || trim(list).empty())
        return all;
    std::vector<bool> chosen(all.size(), false);
    while (!list.empty()) {
        const auto comma = list.find(',');
        const std::string_view item = trim(list.substr(0, comma));
        list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
        if (item.empty())
            continue;
        const auto it = std::find(all.begin(), all.end(), item);
        if (it == all.end())
            throw ConfigError("unknown suite '" + std::string(item) + "'");
        chosen[static_cast<std::size_t>(it - all.begin())] = true;
    }
    std::vector<std::string> out;
    for (std::size_t k = 0; k < all.size(); ++k)
        if (chosen[k])
            out.push_back(all[k]);
    return out;
}

PreDefaultFn parse_candidate(std::string_view text)
{
    std::vector<std::pair<double, double>> table;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto sep = line.find_first_of(", \t");
        if (sep == std::string_view::npos)
            throw ConfigError("candidate line " + std::to_string(line_no) + ": expected t,c");
        const double t = parse_double("candidate t", trim(line.substr(0, sep)));
        std::string_view rest = trim(line.substr(sep + 1));
        if (!rest.empty() && rest.front() == ',')
            rest = trim(rest.substr(1));
        const double c = parse_double("candidate c", rest);
        if (!table.empty() && !(t > table.back().first))
            throw ConfigError("candidate line " + std::to_string(line_no) + ": times must increase");
        table.emplace_back(t, c);
    }
    if (table.empty())
        throw ConfigError("candidate file has no points");
    return [table = std::move(table)](double t, double) {
        if (t <= table.front().first)
            return table.front().second;
        if (t >= table.back().first)
            return table.back().second;
        const auto hi = std::upper_bound(table.begin(), table.end(), t,
                                         [](double x, const auto& row) { return x < row.first; });
        const auto lo = hi - 1;
        const double f = (t - lo->first) / (hi->first - lo->first);
        return lo->second + f * (hi->second - lo->second);
    };
}

PreDefaultFn read_candidate(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read candidate file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_candidate(buf.str());
}

TestReport run_suite(const std::string& suite, const RunConfig& cfg, const PreDefaultFn& candidate)
{
    validate_config(cfg);
    if (suite == "martingales")
        return suite_martingales(cfg, candidate);
    if (suite == "submartingale")
        return suite_submartingale(cfg, candidate);
    if (suite == "identities")
        return suite_identities(cfg, candidate);
    if (suite == "decomposition")
        return suite_decomposition(cfg, candidate);
    if (suite == "detectors")
        return suite_detectors(cfg, candidate);
    if (suite == "nqsa")
        return suite_nqsa(cfg, candidate);
    throw ConfigError("unknown suite '" + suite + "'");
}

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& suites, const PreDefaultFn& candidate,
               const std::filesystem::path& out_path, std::ostream& out, std::ostream& err)
{
    validate_config(cfg);
    std::ofstream file;
    if (!open_output(file, out_path, err))
        return kExitIo;

    TestReport all;
    for (const std::string& suite : suites) {
        const TestReport r = run_suite(suite, cfg, candidate);
        std::size_t failed = 0;
        for (const Check& c : r.checks)
            if (!c.passed)
                ++failed;
        out << suite << ": " << r.checks.size() << " checks, " << failed << " failed\n";
        all.append(r);
    }
    for (const Check& c : all.checks)
        if (!c.passed)
            err << "FAILED " << c.name << "  statistic " << format_double(c.statistic) << "  threshold "
                << format_double(c.threshold) << '\n';

    file << report_json(suites, all.checks);
    file.flush();
    if (!file) {
        err << "error: failed writing " << out_path.string() << '\n';
        return kExitIo;
    }
    out << (all.passed() ? "all checks passed" : "verification FAILED") << "; report in " << out_path.string()
        << '\n';
    return all.passed() ? kExitOk : kExitFailed;
}

std::vector<ValueRow> value_rows(const std::vector<DemoOutcome>& outcomes)
{
    std::vector<ValueRow> rows;
    for (const DemoOutcome& o : outcomes)
        for (std::size_t k = 0; k < o.record_values.size(); ++k)
            for (std::size_t i = 0; i < o.record_times.size(); ++i)
                rows.push_back({o.strategy, k, o.record_times[i], o.record_values[k][i]});
    return rows;
}

int cmd_demo(const RunConfig& cfg, BrokenModel broken, const std::filesystem::path& out_path,
             std::ostream& out, std::ostream& err)
{
    validate_config(cfg);
    std::ofstream file;
    if (!open_output(file, out_path, err))
        return kExitIo;

    DemoSetup setup;
    setup.params = cfg.params;
    setup.steps = cfg.steps;
    setup.n = cfg.n_paths;
    setup.seed = cfg.seed;
    const std::vector<DemoOutcome> outcomes = run_demo(broken, setup);

    out << "market: " << to_string(broken) << '\n';
    bool any_arbitrage = false;
    for (const DemoOutcome& o : outcomes) {
        const double se_fraction =
            std::sqrt(o.expected_fraction * (1.0 - o.expected_fraction) / static_cast<double>(o.n));
        const bool arbitrage = o.max_abs_initial <= 1e-10 && o.min_terminal >= -1e-10 && o.fraction_positive > 0.0;
        any_arbitrage = any_arbitrage || arbitrage;
        out << '\n'
            << "strategy " << o.strategy << ": " << o.description << '\n'
            << "  scenarios        " << o.n << '\n'
            << "  max |V(0)|       " << format_double(o.max_abs_initial) << '\n'
            << "  min V(T)         " << format_double(o.min_terminal) << '\n'
            << "  mean V(T)        " << format_double(o.terminal.mean) << "  se " << format_double(o.terminal.se)
            << "  (closed form " << format_double(o.expected_mean) << ")\n"
            << "  fraction V(T)>0  " << format_double(o.fraction_positive) << "  (closed form "
            << format_double(o.expected_fraction) << ", se " << format_double(se_fraction) << ")\n"
            << "  " << (arbitrage ? "arbitrage: V(0) = 0, V(T) >= 0 and V(T) > 0 with positive probability"
                                  : "no arbitrage detected")
            << '\n';
    }
    out << '\n' << (any_arbitrage ? "arbitrage found" : "no arbitrage found") << '\n';

    write_values_csv(file, value_rows(outcomes));
    file.flush();
    if (!file) {
        err << "error: failed writing " << out_path.string() << '\n';
        return kExitIo;
    }
    out << "value paths written to " << out_path.string() << '\n';
    return kExitOk;
}

}  // namespace hazard::cli
