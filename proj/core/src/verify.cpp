#include "hazard/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hazard/engine.hpp"
#include "hazard/quadrature.hpp"
#include "hazard/special.hpp"

namespace hazard {

CylinderEvent CylinderEvent::full_space()
{
    return {"full", {}, {}, std::nullopt};
}

void CylinderEvent::validate(double horizon) const
{
    if (times.size() != boxes.size())
        throw DomainError("cylinder event needs one box per time");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] >= 0.0 && times[k] <= horizon + 1e-12))
            throw DomainError("cylinder event time outside [0, T]");
        if (k > 0 && !(times[k] > times[k - 1]))
            throw DomainError("cylinder event times must be increasing");
        if (!(boxes[k].first < boxes[k].second))
            throw DomainError("cylinder event box must have lo < hi");
    }
    if (survives_past && !(*survives_past >= 0.0 && *survives_past <= horizon + 1e-12))
        throw DomainError("cylinder event default time outside [0, T]");
}

bool CylinderEvent::contains_path(const Scenario& sc) const
{
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double w = sc.w.w[sc.w.grid.require_index(times[k])];
        if (!(w >= boxes[k].first && w <= boxes[k].second))
            return false;
    }
    return true;
}

bool CylinderEvent::contains(const Scenario& sc) const
{
    if (survives_past && !sc.tau.survives(*survives_past))
        return false;
    return contains_path(sc);
}

double CylinderEvent::last_time() const
{
    double t = times.empty() ? 0.0 : times.back();
    if (survives_past)
        t = std::max(t, *survives_past);
    return t;
}

namespace {

double box_probability(const CylinderEvent& ev, std::size_t k, double x, double t, std::size_t nodes)
{
    if (k == ev.times.size())
        return 1.0;
    const auto [lo, hi] = ev.boxes[k];
    const double z = ev.times[k];
    const double sd = std::sqrt(std::max(0.0, z - t));
    if (sd < 1e-14)
        return x >= lo && x <= hi ? box_probability(ev, k + 1, x, t, nodes) : 0.0;
    if (k + 1 == ev.times.size())
        return norm_cdf((hi - x) / sd) - norm_cdf((lo - x) / sd);
    const double a = std::max(lo, x - 12.0 * sd);
    const double b = std::min(hi, x + 12.0 * sd);
    if (!(a < b))
        return 0.0;
    constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    return integrate_gl(
        [&](double y) {
            const double u = (y - x) / sd;
            return inv_sqrt_2pi * std::exp(-0.5 * u * u) / sd * box_probability(ev, k + 1, y, z, nodes);
        },
        a, b, nodes);
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

Check named(std::string name, const std::vector<double>& values, double k = 4.0)
{
    return two_sided_check(std::move(name), batch_means(values), k);
}

}  // namespace

double cylinder_probability(const CylinderEvent& ev, std::size_t nodes)
{
    if (ev.times.size() > 3)
        throw DomainError("cylinder_probability handles at most three times");
    if (ev.times.size() != ev.boxes.size())
        throw DomainError("cylinder event needs one box per time");
    return box_probability(ev, 0, 0.0, 0.0, nodes);
}

TestReport verify_q_identity(const CylinderEvent& ev, double s, double t, const SimulationSetup& setup)
{
    const double T = setup.params.T;
    ev.validate(T);
    if (ev.survives_past)
        throw DomainError("q identity events must be Brownian cylinders");
    if (!(s >= 0.0 && s < t && t <= T))
        throw DomainError("q identity requires 0 <= s < t <= T");
    const TimeGrid grid = setup.grid();
    const std::size_t is = grid.require_index(s);
    const std::size_t it = grid.require_index(t);

    struct Row {
        double interval;
        double beyond;
    };
    const auto rows = map_scenarios(setup, {}, [&](const Scenario& sc, std::size_t) {
        if (!ev.contains_path(sc))
            return Row{0.0, 0.0};
        const auto& g = sc.survival.g;
        const double in_interval = sc.tau.survives(s) && sc.tau.defaulted_by(t) ? 1.0 : 0.0;
        const double after = sc.tau.survives(T) ? 1.0 : 0.0;
        return Row{in_interval - (g[is] - g[it]), after - g.back()};
    });
    std::vector<double> a(rows.size());
    std::vector<double> b(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        a[k] = rows[k].interval;
        b[k] = rows[k].beyond;
    }
    const std::string base = "q_identity." + ev.name;
    return {{named(base + ".(" + fmt(s) + "," + fmt(t) + "]", a), named(base + ".(T,inf)", b)}};
}

TestReport verify_restriction(const CylinderEvent& ev, const SimulationSetup& setup)
{
    const double T = setup.params.T;
    ev.validate(T);
    if (ev.survives_past)
        throw DomainError("restriction events must be Brownian cylinders");

    struct Row {
        double in_a;
        double g0_error;
    };
    const auto rows = map_scenarios(setup, {}, [&](const Scenario& sc, std::size_t) {
        if (!ev.contains_path(sc))
            return Row{0.0, std::abs(sc.survival.g.front() - 1.0)};
        // Q(A) = Q(A, 0 < tau <= T) + Q(A, T < tau); tau > 0 always.
        const double early = sc.tau.defaulted_by(T) ? 1.0 : 0.0;
        const double late = sc.tau.survives(T) ? 1.0 : 0.0;
        return Row{early + late, std::abs(sc.survival.g.front() - 1.0)};
    });
    std::vector<double> freq(rows.size());
    double g0 = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        freq[k] = rows[k].in_a;
        g0 = std::max(g0, rows[k].g0_error);
    }
    Estimate q = batch_means(freq);

    Estimate oracle{};
    if (ev.times.size() <= 3) {
        oracle.mean = cylinder_probability(ev);
    } else {
        const TimeGrid grid = setup.grid();
        const RngStream root{setup.seed ^ 0x9e3779b97f4a7c15ULL, 0};
        const auto hits = parallel_map<double>(setup.n, setup.parallel.workers, [&](std::size_t k) {
            Scenario sc{simulate_brownian(grid, root.child(k)), DefaultTime::beyond_horizon(), {}, {grid, {}, {}}, {}, {}, {}};
            return ev.contains_path(sc) ? 1.0 : 0.0;
        });
        oracle = batch_means(hits);
    }
    const Estimate diff{q.mean - oracle.mean, std::hypot(q.se, oracle.se), q.n};

    Check g0_check;
    g0_check.name = "restriction." + ev.name + ".g0";
    g0_check.statistic = g0;
    g0_check.threshold = 0.0;
    g0_check.passed = g0 == 0.0;
    g0_check.n = rows.size();
    return {{two_sided_check("restriction." + ev.name, diff), g0_check}};
}

std::vector<std::size_t> rank_buckets(std::span<const double> keys, std::size_t buckets)
{
    if (buckets == 0)
        throw DomainError("need at least one bucket");
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<std::size_t> bucket(keys.size());
    for (std::size_t r = 0; r < order.size(); ++r)
        bucket[order[r]] = r * buckets / order.size();
    return bucket;
}

TestReport verify_conditional_survival(double t, const SimulationSetup& setup, std::size_t buckets)
{
    if (!(t > 0.0 && t <= setup.params.T))
        throw DomainError("conditional survival requires 0 < t <= T");
    const std::size_t it = setup.grid().require_index(t);
    const auto rows = map_scenarios(setup, {}, [&](const Scenario& sc, std::size_t) {
        return std::pair<double, double>{sc.survival.g[it], sc.tau.survives(t) ? 1.0 : 0.0};
    });
    std::vector<double> g(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k)
        g[k] = rows[k].first;
    const auto bucket = rank_buckets(g, buckets);

    TestReport rep;
    for (std::size_t b = 0; b < buckets; ++b) {
        std::vector<double> diff;
        for (std::size_t k = 0; k < rows.size(); ++k)
            if (bucket[k] == b)
                diff.push_back(rows[k].second - rows[k].first);
        rep.checks.push_back(named("conditional_survival.t=" + fmt(t) + ".bucket" + std::to_string(b), diff));
    }
    return rep;
}

std::string to_string(MartingaleProcess m)
{
    switch (m) {
    case MartingaleProcess::discounted_stock:
        return "discounted_stock";
    case MartingaleProcess::discounted_bond:
        return "discounted_bond";
    case MartingaleProcess::discounted_cg:
        return "discounted_cg";
    case MartingaleProcess::undiscounted_stock:
        return "undiscounted_stock";
    }
    return "unknown";
}

TestReport verify_martingale(std::span<const MartingaleProcess> processes, double t1, double t2,
                             std::span<const CylinderEvent> events, const SimulationSetup& setup)
{
    const ModelParams& p = setup.params;
    if (!(t1 >= 0.0 && t1 < t2 && t2 <= p.T))
        throw DomainError("martingale test requires 0 <= t1 < t2 <= T");
    const bool brownian_only = std::find(processes.begin(), processes.end(), MartingaleProcess::discounted_cg)
        != processes.end();
    for (const auto& ev : events) {
        ev.validate(p.T);
        if (ev.last_time() > t1 + 1e-12)
            throw DomainError("test event " + ev.name + " looks past t1");
        if (brownian_only && ev.survives_past)
            throw DomainError("cG is an F-martingale; its test events cannot involve the default time");
    }
    const TimeGrid grid = setup.grid();
    const std::size_t i1 = grid.require_index(t1);
    const std::size_t i2 = grid.require_index(t2);
    const std::vector<double> times{t1, t2};

    struct Row {
        std::vector<double> increment;
        std::vector<char> in;
    };
    const auto rows = map_scenarios(setup, times, [&](const Scenario& sc, std::size_t) {
        auto value = [&](MartingaleProcess m, std::size_t i) {
            const double t = grid.time(i);
            const double df = std::exp(-p.r * t);
            switch (m) {
            case MartingaleProcess::discounted_stock:
                return df * sc.s[i];
            case MartingaleProcess::discounted_bond:
                return df * sc.d_at(i);
            case MartingaleProcess::discounted_cg:
                return df * sc.c_at(i) * sc.survival.g[i];
            case MartingaleProcess::undiscounted_stock:
                return sc.s[i];
            }
            return 0.0;
        };
        Row row;
        for (auto m : processes)
            row.increment.push_back(value(m, i2) - value(m, i1));
        for (const auto& ev : events)
            row.in.push_back(ev.contains(sc) ? 1 : 0);
        return row;
    });

    TestReport rep;
    std::vector<double> column(rows.size());
    for (std::size_t j = 0; j < processes.size(); ++j) {
        for (std::size_t e = 0; e < events.size(); ++e) {
            for (std::size_t k = 0; k < rows.size(); ++k)
                column[k] = rows[k].in[e] ? rows[k].increment[j] : 0.0;
            rep.checks.push_back(named("martingale." + to_string(processes[j]) + ".(" + fmt(t1) + "," + fmt(t2)
                                           + ")." + events[e].name,
                                       column));
        }
    }
    return rep;
}

std::vector<CylinderEvent> standard_events(const TimeGrid& grid, double t1, bool with_default)
{
    const double inf = std::numeric_limits<double>::infinity();
    auto snap = [&](double f) { return grid.time(static_cast<std::size_t>(std::llround(f * t1 / grid.dt()))); };
    const double t_full = snap(1.0);
    const double t_half = snap(0.5);
    const double t_quarter = snap(0.25);
    const double t_three = snap(0.75);

    std::vector<CylinderEvent> out{CylinderEvent::full_space()};
    const std::vector<std::pair<std::string, std::pair<double, double>>> bands{
        {"pos", {0.0, inf}}, {"neg", {-inf, 0.0}}, {"mid", {-0.5, 0.5}}, {"hi", {0.5, inf}}, {"lo", {-inf, -0.5}}};
    for (auto [tag, t] : {std::pair{"t1", t_full}, std::pair{"half", t_half}, std::pair{"quarter", t_quarter}}) {
        if (t <= 0.0)
            continue;
        for (const auto& [band, box] : bands)
            out.push_back({std::string("W_") + tag + "_" + band, {t}, {box}, std::nullopt});
    }
    if (t_half > 0.0 && t_half < t_full) {
        for (auto [a, ba] : {std::pair{"pos", std::pair{0.0, inf}}, std::pair{"neg", std::pair{-inf, 0.0}}})
            for (auto [b, bb] : {std::pair{"pos", std::pair{0.0, inf}}, std::pair{"neg", std::pair{-inf, 0.0}}})
                out.push_back({std::string("W_half_") + a + "_t1_" + b, {t_half, t_full}, {ba, bb}, std::nullopt});
    }
    if (t_three > 0.0) {
        out.push_back({"W_three_pos", {t_three}, {{0.0, inf}}, std::nullopt});
        out.push_back({"W_three_neg", {t_three}, {{-inf, 0.0}}, std::nullopt});
    }
    out.push_back({"W_t1_above_1", {t_full}, {{1.0, inf}}, std::nullopt});
    out.push_back({"W_t1_below_m1", {t_full}, {{-inf, -1.0}}, std::nullopt});

    if (with_default) {
        const std::size_t base = out.size();
        for (std::size_t k = 0; k < base; ++k) {
            CylinderEvent ev = out[k];
            const double s = k % 2 == 0 ? t_full : t_half;
            ev.survives_past = s;
            ev.name += "_alive_" + fmt(s);
            out.push_back(std::move(ev));
        }
    }
    return out;
}

TestReport verify_strict_submartingale(std::span<const std::pair<double, double>> pairs,
                                       const SimulationSetup& setup, std::size_t buckets)
{
    const ModelParams& p = setup.params;
    const TimeGrid grid = setup.grid();
    std::vector<double> times;
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    for (auto [t1, t2] : pairs) {
        if (!(t1 >= 0.0 && t1 < t2 && t2 <= p.T))
            throw DomainError("strictness pairs need 0 <= t1 < t2 <= T");
        idx.emplace_back(grid.require_index(t1), grid.require_index(t2));
        times.push_back(t1);
        times.push_back(t2);
    }

    // Per pair: W(t1), discounted c increment, G increment.
    const auto rows = map_scenarios(setup, times, [&](const Scenario& sc, std::size_t) {
        std::vector<double> row;
        for (auto [i1, i2] : idx) {
            const double c1 = std::exp(-p.r * grid.time(i1)) * sc.c_at(i1);
            const double c2 = std::exp(-p.r * grid.time(i2)) * sc.c_at(i2);
            row.push_back(sc.w.w[i1]);
            row.push_back(c2 - c1);
            row.push_back(sc.survival.g[i2] - sc.survival.g[i1]);
        }
        return row;
    });

    TestReport rep;
    for (std::size_t j = 0; j < idx.size(); ++j) {
        std::vector<double> key(rows.size());
        for (std::size_t k = 0; k < rows.size(); ++k)
            key[k] = rows[k][3 * j];
        const auto bucket = rank_buckets(key, buckets);
        const std::string pair = "(" + fmt(pairs[j].first) + "," + fmt(pairs[j].second) + ")";
        for (std::size_t b = 0; b < buckets; ++b) {
            std::vector<double> dc;
            std::vector<double> dg;
            for (std::size_t k = 0; k < rows.size(); ++k) {
                if (bucket[k] != b)
                    continue;
                dc.push_back(rows[k][3 * j + 1]);
                dg.push_back(rows[k][3 * j + 2]);
            }
            const std::string base = "submartingale." + pair + ".bucket" + std::to_string(b);
            rep.checks.push_back(one_sided_check(base + ".c_increases", batch_means(dc), Sidedness::greater));
            rep.checks.push_back(one_sided_check(base + ".g_decreases", batch_means(dg), Sidedness::less));
        }
    }
    return rep;
}

Check expect_failure(std::string name, const TestReport& control)
{
    Check c;
    c.name = std::move(name);
    double worst = 0.0;
    for (const auto& k : control.checks) {
        if (k.n > c.n)
            c.n = k.n;
        if (k.threshold > 0.0)
            worst = std::max(worst, std::abs(k.statistic) / k.threshold);
    }
    // Largest |statistic| / threshold among the control's checks; > 1 means
    // at least one of them failed.
    c.statistic = worst;
    c.threshold = 1.0;
    c.passed = !control.passed();
    c.sidedness = Sidedness::greater;
    return c;
}

}  // namespace hazard
