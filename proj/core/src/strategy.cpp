#include "hazard/strategy.hpp"

#include <algorithm>
#include <cmath>

#include "hazard/quadrature.hpp"
#include "hazard/rng.hpp"

namespace hazard {

double History::w_at(std::size_t i) const
{
    if (i > cutoff_)
        throw DomainError("position rule looked at the path after its rebalancing time");
    return sc_->w.w.at(i);
}

bool History::survived() const
{
    if (!default_visible_)
        throw DomainError("default indicator is not available to this strategy");
    return sc_->tau.survives(time());
}

double History::d() const
{
    if (!default_visible_)
        throw DomainError("defaultable bond price is not available to this strategy");
    return price_ && *price_ ? (*price_)(*sc_, cutoff_) : sc_->d_at(cutoff_);
}

PositionRule hold(Positions x)
{
    return [x](const History&) { return x; };
}

double Claim::conditional_value(double t, double w, double r) const
{
    const double left = maturity - t;
    if (left <= 1e-14)
        return payoff(w);
    return std::exp(-r * left) * gaussian_expectation(payoff, w, std::sqrt(left), nodes);
}

double Claim::value(const Scenario& sc, std::size_t grid_index, double r) const
{
    const double t = sc.w.grid.time(grid_index);
    if (t <= maturity + 1e-12)
        return conditional_value(t, sc.w.w[grid_index], r);
    const std::size_t m = sc.w.grid.require_index(maturity);
    return payoff(sc.w.w[m]) * std::exp(r * (t - maturity));
}

namespace {

void validate_times(const std::vector<double>& times, std::size_t intervals, const ModelParams& p)
{
    if (intervals == 0)
        throw DomainError("strategy needs at least one interval");
    if (times.size() != intervals + 1)
        throw DomainError("strategy needs one more time than intervals");
    if (times.front() != 0.0)
        throw DomainError("strategy times must start at 0");
    if (std::abs(times.back() - p.T) > 1e-12)
        throw DomainError("strategy times must end at T");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw DomainError("strategy times must be strictly increasing");
}

std::vector<std::size_t> time_indices(const std::vector<double>& times, const Scenario& sc)
{
    std::vector<std::size_t> idx;
    idx.reserve(times.size());
    for (double t : times) {
        const std::size_t i = sc.w.grid.require_index(t);
        if (!sc.is_observed(i))
            throw DomainError("strategy time is not an observed node of the scenario");
        idx.push_back(i);
    }
    return idx;
}

// Interval n (1-based) with grid index i in (idx[n-1], idx[n]]; node 0 maps to 1.
std::size_t interval_of(const std::vector<std::size_t>& idx, std::size_t i)
{
    std::size_t n = 1;
    while (n + 1 < idx.size() && i > idx[n])
        ++n;
    return n;
}

}  // namespace

void QuasiSimpleStrategy::validate(const ModelParams& p) const
{
    validate_times(times, intervals(), p);
    if (rules.size() != legs.size())
        throw DomainError("strategy needs one position rule per leg");
    for (const auto& rule : rules)
        if (!rule)
            throw DomainError("strategy has an empty position rule");
}

double leg_value(const BSLeg& leg, const Positions& x, const Scenario& sc, std::size_t i,
                 const ModelParams& p)
{
    const double t = sc.w.grid.time(i);
    double v = x.shares * sc.s[i] + x.bonds * riskless_bond(t, p);
    if (leg.claim && x.claim_units != 0.0)
        v += x.claim_units * leg.claim->value(sc, i, p.r);
    return v;
}

std::size_t StrategyRun::leg_at(const QuasiSimpleStrategy& strat, double t) const
{
    std::size_t n = 1;
    while (n < strat.intervals() && t > strat.times[n] + 1e-12)
        ++n;
    return std::min(n, mu);
}

StrategyRun run_strategy(const QuasiSimpleStrategy& strat, const Scenario& sc, const ModelParams& p)
{
    strat.validate(p);
    const std::vector<std::size_t> idx = time_indices(strat.times, sc);
    const std::size_t N = strat.intervals();

    StrategyRun run;
    run.mu = 1;
    for (std::size_t m = 2; m <= N; ++m)
        if (sc.tau.survives(strat.times[m - 1]))
            run.mu = m;

    for (std::size_t n = 1; n <= run.mu; ++n) {
        const std::size_t i = idx[n - 1];
        // n <= mu, so the bond has not defaulted at s_{n-1}.
        const double c = sc.c_at(i);
        const History h(sc, i, false);
        Positions x = strat.rules[n - 1](h);
        const BSLeg& leg = strat.legs[n - 1];

        double pre = strat.initial_value;
        if (n > 1) {
            const Positions& prev = run.positions.back();
            pre = leg_value(strat.legs[n - 2], prev, sc, i, p) + prev.defaultable * c;
        }
        if (leg.balance_funded) {
            x.bonds = 0.0;
            const double rest = leg_value(leg, x, sc, i, p) + x.defaultable * c;
            x.bonds = (pre - rest) / riskless_bond(strat.times[n - 1], p);
        }
        if (n > 1) {
            const double post = leg_value(leg, x, sc, i, p) + x.defaultable * c;
            run.gaps.push_back(std::abs(post - pre));
        }
        run.positions.push_back(x);
    }

    run.value.resize(sc.observed.size());
    for (std::size_t k = 0; k < sc.observed.size(); ++k) {
        const std::size_t i = sc.observed[k];
        const std::size_t n = std::min(interval_of(idx, i), run.mu);
        const Positions& x = run.positions[n - 1];
        run.value[k] = leg_value(strat.legs[n - 1], x, sc, i, p) + x.defaultable * sc.d[k];
    }
    return run;
}

std::vector<double> value_process(const QuasiSimpleStrategy& strat, const Scenario& sc,
                                  const ModelParams& p)
{
    return run_strategy(strat, sc, p).value;
}

bool check_self_financing(const QuasiSimpleStrategy& strat, const Scenario& sc,
                          const ModelParams& p, double tol)
{
    const StrategyRun run = run_strategy(strat, sc, p);
    return std::all_of(run.gaps.begin(), run.gaps.end(), [tol](double g) { return g <= tol; });
}

double TheoremArbitrage::continuation(double w) const
{
    if (t2 - t1 <= 0.0)
        return candidate(t2, w);
    return gaussian_expectation([this](double x) { return candidate(t2, x); }, w, std::sqrt(t2 - t1), nodes);
}

bool TheoremArbitrage::in_a(double c1, double w, double r) const
{
    return std::exp(-r * t1) * c1 >= std::exp(-r * t2) * continuation(w);
}

double TheoremArbitrage::terminal_identity(const Scenario& sc, const ModelParams& p) const
{
    if (!sc.tau.survives(t1))
        return 0.0;
    const std::size_t i1 = sc.w.grid.require_index(t1);
    const double c1 = sc.c_at(i1);
    const double w1 = sc.w.w[i1];
    if (!in_a(c1, w1, p.r))
        return 0.0;
    const double e = continuation(w1);
    double v = (c1 - std::exp(-p.r * (t2 - t1)) * e) / riskless_bond(t1, p);
    if (sc.tau.defaulted_by(t2))
        v += sc.c_at(sc.w.grid.require_index(t2)) / riskless_bond(t2, p);
    return v;
}

TheoremArbitrage build_theorem_arbitrage(double t1, double t2, const ModelParams& p,
                                         PreDefaultFn candidate, std::size_t nodes)
{
    validate_params(p);
    if (!(t1 >= 0.0 && t1 < t2 && t2 <= p.T))
        throw DomainError("theorem arbitrage requires 0 <= t1 < t2 <= T");
    if (!candidate)
        throw DomainError("theorem arbitrage requires a candidate pre-default value");

    TheoremArbitrage arb;
    arb.t1 = t1;
    arb.t2 = t2;
    arb.candidate = std::move(candidate);
    arb.nodes = nodes;

    QuasiSimpleStrategy& s = arb.strategy;
    s.name = "theorem_arbitrage";
    s.times.push_back(0.0);
    if (t1 > 0.0) {
        s.times.push_back(t1);
        s.legs.push_back({});
        s.rules.push_back(hold({}));
    }

    Claim claim;
    claim.maturity = t2;
    claim.payoff = [c = arb.candidate, t2](double w) { return c(t2, w); };
    claim.nodes = nodes;
    s.legs.push_back({claim, true});
    // The rule owns a copy of the event test so the strategy stays valid
    // when the TheoremArbitrage value is moved or copied.
    TheoremArbitrage test = arb;
    const double r = p.r;
    s.rules.push_back([test, r](const History& h) {
        if (!test.in_a(h.c(), h.w(), r))
            return Positions{};
        return Positions{0.0, 0.0, 1.0, -1.0};
    });

    if (t2 < p.T) {
        s.times.push_back(t2);
        s.legs.push_back({std::nullopt, true});
        s.rules.push_back(hold({}));
    }
    s.times.push_back(p.T);
    return arb;
}

QuasiSimpleStrategy random_strategy(std::uint64_t seed, std::size_t k, const ModelParams& p,
                                    const RandomStrategyOptions& opts)
{
    if (opts.time_slots < 2)
        throw DomainError("random strategies need at least two time slots");
    CounterRng gen(seed, k, RngStream::kAuxiliary);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * gen.uniform(); };

    std::vector<std::size_t> slots(opts.time_slots - 1);
    for (std::size_t j = 0; j < slots.size(); ++j)
        slots[j] = j + 1;
    // Fisher-Yates with our own index draw; std::shuffle's draws are
    // library-specific and would make strategies differ across toolchains.
    for (std::size_t j = slots.size(); j > 1; --j)
        std::swap(slots[j - 1], slots[static_cast<std::size_t>(gen.uniform() * static_cast<double>(j))]);
    const std::size_t interior =
        1 + static_cast<std::size_t>(gen.uniform() * static_cast<double>(std::min(opts.max_interior_times, slots.size())));
    slots.resize(std::min(interior, slots.size()));
    std::sort(slots.begin(), slots.end());

    QuasiSimpleStrategy s;
    s.name = "random_" + std::to_string(k);
    s.times.push_back(0.0);
    for (std::size_t slot : slots)
        s.times.push_back(p.T * static_cast<double>(slot) / static_cast<double>(opts.time_slots));
    s.times.push_back(p.T);

    const double half_y = 0.5 * opts.max_bond_position;
    for (std::size_t n = 1; n < s.times.size(); ++n) {
        const double shares = gen.uniform() < 0.5 ? 0.0 : uniform(-opts.max_notional_factor, opts.max_notional_factor);
        const double base = uniform(-half_y, half_y);
        const double tilt = uniform(-half_y, half_y);
        BSLeg leg{std::nullopt, true};
        double units = 0.0;
        if (gen.uniform() < opts.claim_probability) {
            const double strike = uniform(-1.0, 1.0);
            leg.claim = Claim{s.times[n], [strike](double w) { return std::tanh(w - strike); }, 32};
            units = uniform(-opts.max_notional_factor, opts.max_notional_factor);
        }
        s.legs.push_back(leg);
        s.rules.push_back([=](const History& h) {
            return Positions{shares, 0.0, units, base + tilt * (h.w() >= 0.0 ? 1.0 : -1.0)};
        });
    }
    return s;
}

std::vector<double> strategy_times(const std::vector<QuasiSimpleStrategy>& strategies)
{
    std::vector<double> times;
    for (const auto& s : strategies)
        times.insert(times.end(), s.times.begin(), s.times.end());
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

BatteryReport nqsa_battery(const std::vector<QuasiSimpleStrategy>& strategies, const SimulationSetup& setup)
{
    const ModelParams& p = setup.params;
    for (const auto& s : strategies)
        s.validate(p);
    const std::size_t m = strategies.size();
    const double df = std::exp(-p.r * p.T);

    // Per scenario: V(0) and e^{-rT} V(T) for every strategy.
    const auto rows = map_scenarios(setup, strategy_times(strategies), [&](const Scenario& sc, std::size_t) {
        std::vector<double> row(2 * m);
        for (std::size_t j = 0; j < m; ++j) {
            const StrategyRun run = run_strategy(strategies[j], sc, p);
            row[2 * j] = run.value.front();
            row[2 * j + 1] = df * run.terminal();
        }
        return row;
    });

    BatteryReport rep;
    std::vector<double> column(rows.size());
    for (std::size_t j = 0; j < m; ++j) {
        double worst_start = 0.0;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            worst_start = std::max(worst_start, std::abs(rows[k][2 * j]));
            column[k] = rows[k][2 * j + 1];
        }
        const Estimate e = batch_means(column);
        rep.discounted_terminal.push_back(e);
        rep.checks.push_back(two_sided_check("nqsa." + strategies[j].name + ".discounted_terminal", e));

        Check start;
        start.name = "nqsa." + strategies[j].name + ".zero_cost";
        start.statistic = worst_start;
        start.threshold = 1e-10;
        start.passed = worst_start <= 1e-10;
        start.n = rows.size();
        rep.checks.push_back(start);
    }
    return rep;
}

void BDSimpleStrategy::validate(const ModelParams& p) const
{
    validate_times(times, intervals(), p);
    for (const auto& rule : rules)
        if (!rule)
            throw DomainError("strategy has an empty position rule");
}

BDRun run_bd_strategy(const BDSimpleStrategy& strat, const Scenario& sc, const ModelParams& p,
                      const BondPriceFn& price)
{
    strat.validate(p);
    const std::vector<std::size_t> idx = time_indices(strat.times, sc);
    const BondPriceFn bond = price ? price : BondPriceFn([](const Scenario& s, std::size_t i) { return s.d_at(i); });
    const std::size_t N = strat.intervals();

    std::vector<Positions> held;
    BDRun run;
    for (std::size_t n = 1; n <= N; ++n) {
        const std::size_t i = idx[n - 1];
        const History h(sc, i, true, &bond);
        const Positions x = strat.rules[n - 1](h);
        if (x.shares != 0.0 || x.claim_units != 0.0)
            throw DomainError("bond-market strategies hold only B and D");
        if (n > 1) {
            const double b = riskless_bond(strat.times[n - 1], p);
            const double d = bond(sc, i);
            const Positions& prev = held.back();
            run.gaps.push_back(std::abs((x.bonds - prev.bonds) * b + (x.defaultable - prev.defaultable) * d));
        }
        held.push_back(x);
    }

    run.value.resize(sc.observed.size());
    for (std::size_t k = 0; k < sc.observed.size(); ++k) {
        const std::size_t i = sc.observed[k];
        const Positions& x = held[interval_of(idx, i) - 1];
        run.value[k] = x.bonds * riskless_bond(sc.w.grid.time(i), p) + x.defaultable * bond(sc, i);
    }
    return run;
}

std::vector<double> bd_value_process(const BDSimpleStrategy& strat, const Scenario& sc,
                                     const ModelParams& p, const BondPriceFn& price)
{
    return run_bd_strategy(strat, sc, p, price).value;
}

namespace {

BDSimpleStrategy detector_at(double t, const ModelParams& p, std::string name, PositionRule rule)
{
    validate_params(p);
    if (!(t >= 0.0 && t < p.T))
        throw DomainError("detector time must lie in [0, T)");
    BDSimpleStrategy s;
    s.name = std::move(name);
    s.times.push_back(0.0);
    if (t > 0.0) {
        s.times.push_back(t);
        s.rules.push_back(hold({}));
    }
    s.times.push_back(p.T);
    s.rules.push_back(std::move(rule));
    return s;
}

}  // namespace

BDSimpleStrategy build_postdefault_detector(double t, const ModelParams& p)
{
    const double b = riskless_bond(t, p);
    return detector_at(t, p, "postdefault_detector", [b](const History& h) {
        if (h.survived())
            return Positions{};
        const double d = h.d();
        const double side = d > 0.0 ? 1.0 : d < 0.0 ? -1.0 : 0.0;
        return Positions{0.0, d * side / b, 0.0, -side};
    });
}

BDSimpleStrategy build_range_detector(double t, const ModelParams& p)
{
    const double b = riskless_bond(t, p);
    return detector_at(t, p, "range_detector", [b](const History& h) {
        if (!h.survived())
            return Positions{};
        const double c = h.d();
        const double side = c >= 1.0 ? 1.0 : c <= 0.0 ? -1.0 : 0.0;
        return Positions{0.0, c * side / b, 0.0, -side};
    });
}

BondPriceFn postdefault_fault(std::size_t grid_index, double bump)
{
    return [grid_index, bump](const Scenario& sc, std::size_t i) {
        double d = sc.d_at(i);
        if (i == grid_index && sc.tau.defaulted_by(sc.w.grid.time(i)))
            d += bump;
        return d;
    };
}

double claim_delta(const Claim& claim, double t, double w, double s, const ModelParams& p, double h)
{
    const double up = claim.conditional_value(t, w + h, p.r);
    const double down = claim.conditional_value(t, w - h, p.r);
    return (up - down) / (2.0 * h * p.sigma * s);
}

double delta_hedge_error(const Claim& claim, const Scenario& sc, std::size_t t_index, const ModelParams& p)
{
    const TimeGrid& grid = sc.w.grid;
    const std::size_t m = grid.require_index(claim.maturity);
    if (t_index >= m)
        throw DomainError("hedge must start before the claim matures");
    double value = claim.conditional_value(grid.time(t_index), sc.w.w[t_index], p.r);
    for (std::size_t i = t_index; i < m; ++i) {
        const double delta = claim_delta(claim, grid.time(i), sc.w.w[i], sc.s[i], p);
        const double cash = value - delta * sc.s[i];
        const double dt = grid.time(i + 1) - grid.time(i);
        value = delta * sc.s[i + 1] + cash * std::exp(p.r * dt);
    }
    return value - claim.payoff(sc.w.w[m]);
}

}  // namespace hazard
