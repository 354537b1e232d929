#include "hazard/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "hazard/rng.hpp"

namespace hazard {

Lattice::Lattice(LatticeKind kind, double horizon, std::size_t steps, double rate)
    : kind_(kind), horizon_(horizon), steps_(steps), dt_(horizon / static_cast<double>(steps)), rate_(rate)
{
    if (steps < 1)
        throw DomainError("lattice needs at least one step");
    if (!(horizon > 0.0))
        throw DomainError("lattice horizon must be > 0");
    if (!(rate >= 0.0))
        throw DomainError("lattice rate must be >= 0");
    if (kind == LatticeKind::tree && steps > 20)
        throw DomainError("non-recombining tree limited to 20 steps");
    offsets_.reserve(steps + 2);
    offsets_.push_back(0);
    for (std::size_t i = 0; i <= steps; ++i)
        offsets_.push_back(offsets_.back() + width(i));
}

Lattice Lattice::recombining(double horizon, std::size_t steps, double rate)
{
    return Lattice(LatticeKind::recombining, horizon, steps, rate);
}

Lattice Lattice::tree(double horizon, std::size_t steps, double rate)
{
    return Lattice(LatticeKind::tree, horizon, steps, rate);
}

std::size_t Lattice::width(std::size_t i) const noexcept
{
    return kind_ == LatticeKind::recombining ? i + 1 : std::size_t{1} << i;
}

double Lattice::time(std::size_t i) const noexcept
{
    return i == steps_ ? horizon_ : static_cast<double>(i) * dt_;
}

double Lattice::level(std::size_t i, std::size_t j) const noexcept
{
    const auto ups = kind_ == LatticeKind::recombining ? j : static_cast<std::size_t>(std::popcount(j));
    return (2.0 * static_cast<double>(ups) - static_cast<double>(i)) * std::sqrt(dt_);
}

std::size_t Lattice::up(std::size_t i, std::size_t j) const noexcept
{
    return kind_ == LatticeKind::recombining ? j + 1 : j | (std::size_t{1} << i);
}

std::size_t Lattice::down(std::size_t, std::size_t j) const noexcept
{
    return j;
}

LatticeProcess sample_on_lattice(const Lattice& lat, const PreDefaultFn& f)
{
    LatticeProcess out(lat);
    for (std::size_t i = 0; i <= lat.steps(); ++i)
        for (std::size_t j = 0; j < lat.width(i); ++j)
            out.at(lat, i, j) = f(lat.time(i), lat.level(i, j));
    return out;
}

std::pair<Lattice, LatticeProcess> lattice_from_model(const ModelParams& p, std::size_t steps)
{
    validate_params(p);
    if (steps < 2)
        throw DomainError("lattice_from_model requires steps >= 2");
    Lattice lat = Lattice::recombining(p.T, steps, p.r);
    LatticeProcess c = sample_on_lattice(lat, [&](double t, double w) {
        return t >= p.T ? 1.0 : pre_default_value(t, w, p);
    });
    for (std::size_t j = 0; j < lat.width(steps); ++j)
        c.at(lat, steps, j) = 1.0;
    return {std::move(lat), std::move(c)};
}

std::pair<Lattice, LatticeProcess> lattice_backward_values(const ModelParams& p, std::size_t steps)
{
    validate_params(p);
    if (steps < 2)
        throw DomainError("lattice_backward_values requires steps >= 2");
    Lattice lat = Lattice::recombining(p.T, steps, p.r);
    LatticeProcess c(lat, 1.0);
    const double up_factor = std::exp(-(p.r + p.lambda_plus) * lat.dt());
    const double down_factor = std::exp(-(p.r + p.lambda_minus) * lat.dt());
    for (std::size_t i = steps; i-- > 0;) {
        for (std::size_t j = 0; j < lat.width(i); ++j) {
            // Levels are multiples of sqrt(dt); compare the integer 2j - i so a
            // node at zero is not misclassified by rounding.
            const bool above = 2 * j >= i;
            const double next = 0.5 * (c.at(lat, i + 1, lat.up(i, j)) + c.at(lat, i + 1, lat.down(i, j)));
            c.at(lat, i, j) = (above ? up_factor : down_factor) * next;
        }
    }
    return {std::move(lat), std::move(c)};
}

namespace {

struct NodeRef {
    std::size_t i;
    std::size_t j;
};

NodeRef locate(const Lattice& lat, std::size_t flat)
{
    std::size_t lo = 0;
    std::size_t hi = lat.steps();
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (lat.index(mid, 0) <= flat)
            lo = mid;
        else
            hi = mid - 1;
    }
    return {lo, flat - lat.index(lo, 0)};
}

LatticeProcess discount(const Lattice& lat, const LatticeProcess& c)
{
    if (c.values.size() != lat.size())
        throw DomainError("process does not match the lattice");
    LatticeProcess out(lat);
    for (std::size_t i = 0; i <= lat.steps(); ++i) {
        const double df = std::exp(-lat.rate() * lat.time(i));
        for (std::size_t j = 0; j < lat.width(i); ++j) {
            const double v = c.at(lat, i, j);
            if (!(v > 0.0) || !std::isfinite(v))
                throw DomainError("multiplicative_decompose requires c > 0 at every node");
            out.at(lat, i, j) = df * v;
        }
    }
    return out;
}

double one_step_factor(const Lattice& lat, const LatticeProcess& disc, std::size_t i, std::size_t j)
{
    const double next = 0.5 * (disc.at(lat, i + 1, lat.up(i, j)) + disc.at(lat, i + 1, lat.down(i, j)));
    return disc.at(lat, i, j) / next;
}

// G at a tree node as the product of its ancestors' factors, root first.
double tree_survival(const Lattice& lat, const LatticeProcess& factor, std::size_t i, std::size_t j)
{
    double g = 1.0;
    for (std::size_t k = 0; k < i; ++k) {
        const std::size_t ancestor = j & ((std::size_t{1} << k) - 1);
        g *= factor.at(lat, k, ancestor);
    }
    return g;
}

Decomposition decompose_in_order(const Lattice& lat, const LatticeProcess& c,
                                 std::span<const std::size_t> order)
{
    Decomposition dec{LatticeProcess(lat, 1.0), discount(lat, c), std::nullopt, std::nullopt};
    for (std::size_t flat : order) {
        const auto [i, j] = locate(lat, flat);
        dec.step_factor.at(lat, i, j) = one_step_factor(lat, dec.discounted, i, j);
    }
    if (lat.kind() == LatticeKind::tree) {
        LatticeProcess g(lat);
        LatticeProcess m(lat);
        for (std::size_t i = 0; i <= lat.steps(); ++i) {
            for (std::size_t j = 0; j < lat.width(i); ++j) {
                g.at(lat, i, j) = tree_survival(lat, dec.step_factor, i, j);
                m.at(lat, i, j) = dec.discounted.at(lat, i, j) * g.at(lat, i, j);
            }
        }
        dec.survival = std::move(g);
        dec.martingale = std::move(m);
    }
    return dec;
}

}  // namespace

Decomposition multiplicative_decompose(const Lattice& lat, const LatticeProcess& c)
{
    std::vector<std::size_t> order(lat.index(lat.steps(), 0));
    std::iota(order.begin(), order.end(), std::size_t{0});
    return decompose_in_order(lat, c, order);
}

Decomposition multiplicative_decompose(const Lattice& lat, const LatticeProcess& c,
                                       std::span<const std::size_t> order)
{
    const std::size_t interior = lat.index(lat.steps(), 0);
    std::vector<std::size_t> sorted(order.begin(), order.end());
    std::sort(sorted.begin(), sorted.end());
    bool permutation = sorted.size() == interior;
    for (std::size_t k = 0; permutation && k < sorted.size(); ++k)
        permutation = sorted[k] == k;
    if (!permutation)
        throw DomainError("evaluation order must be a permutation of the non-terminal nodes");
    return decompose_in_order(lat, c, order);
}

std::vector<double> survival_along(const Lattice& lat, const Decomposition& dec,
                                   const std::vector<bool>& moves)
{
    if (moves.size() > lat.steps())
        throw DomainError("path longer than the lattice");
    std::vector<double> g{1.0};
    std::size_t j = 0;
    for (std::size_t i = 0; i < moves.size(); ++i) {
        g.push_back(g.back() * dec.step_factor.at(lat, i, j));
        j = moves[i] ? lat.up(i, j) : lat.down(i, j);
    }
    return g;
}

bool DecompositionReport::passed() const noexcept
{
    return martingale_ok() && max_product_residual <= residual_tolerance && non_increasing && positive
        && starts_at_one && previsible && equivalence_holds();
}

DecompositionReport verify_decomposition(const Lattice& lat, const LatticeProcess& c,
                                         const Decomposition& dec, double tol)
{
    DecompositionReport rep;
    rep.residual_tolerance = tol;
    const LatticeProcess disc = discount(lat, c);
    const bool tree = lat.kind() == LatticeKind::tree && dec.survival.has_value();

    for (std::size_t i = 0; i < lat.steps(); ++i) {
        for (std::size_t j = 0; j < lat.width(i); ++j) {
            const std::size_t ju = lat.up(i, j);
            const std::size_t jd = lat.down(i, j);
            const double cu = disc.at(lat, i + 1, ju);
            const double cd = disc.at(lat, i + 1, jd);
            const double here = disc.at(lat, i, j);
            if (!(0.5 * (cu + cd) > here))
                rep.c_strict = false;

            double g_here = 1.0;
            double g_up = dec.step_factor.at(lat, i, j);
            double g_down = g_up;
            if (tree) {
                const auto& g = *dec.survival;
                g_here = g.at(lat, i, j);
                g_up = g.at(lat, i + 1, ju);
                g_down = g.at(lat, i + 1, jd);
            }
            // On the recombining lattice G is normalised to 1 at the
            // predecessor; along any path G <= 1 so this bounds the residual.
            const double residual = std::abs(here * g_here - 0.5 * (cu * g_up + cd * g_down));
            rep.max_martingale_residual = std::max(rep.max_martingale_residual, residual);
            if (g_up != g_down)
                rep.previsible = false;
            for (double gc : {g_up, g_down}) {
                if (!(gc > 0.0))
                    rep.positive = false;
                if (!(gc <= g_here))
                    rep.non_increasing = false;
                if (!(gc < g_here))
                    rep.g_strict = false;
            }
        }
    }
    if (tree) {
        const auto& g = *dec.survival;
        rep.starts_at_one = g.at(lat, 0, 0) == 1.0;
        if (dec.martingale) {
            for (std::size_t k = 0; k < lat.size(); ++k)
                rep.max_product_residual =
                    std::max(rep.max_product_residual, std::abs(dec.martingale->values[k] - disc.values[k] * g.values[k]));
        }
    }

    if (!rep.martingale_ok())
        rep.failures.push_back("martingale residual " + std::to_string(rep.max_martingale_residual));
    if (rep.max_product_residual > tol)
        rep.failures.push_back("M differs from c G");
    if (!rep.non_increasing)
        rep.failures.push_back("G increases on some edge");
    if (!rep.positive)
        rep.failures.push_back("G not strictly positive");
    if (!rep.starts_at_one)
        rep.failures.push_back("G(0) != 1");
    if (!rep.previsible)
        rep.failures.push_back("G differs across the branches of a node");
    if (!rep.equivalence_holds())
        rep.failures.push_back("c strictness does not match G strictness");
    return rep;
}

double survival_deviation(const Lattice& lat, const Decomposition& dec, const ModelParams& p,
                          const std::vector<bool>& moves)
{
    const std::vector<double> g = survival_along(lat, dec, moves);
    const double spread = p.lambda_plus - p.lambda_minus;
    double gamma = 0.0;
    long level = 0;  // in units of sqrt(dt)
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double formula = std::exp(-spread * gamma - p.lambda_minus * lat.time(i));
        worst = std::max(worst, std::abs(g[i] / formula - 1.0));
        if (i < moves.size()) {
            if (level >= 0)
                gamma += lat.dt();
            level += moves[i] ? 1 : -1;
        }
    }
    return worst;
}

SurvivalComparison lattice_survival_comparison(const ModelParams& p, std::size_t steps,
                                               std::size_t paths, std::uint64_t seed)
{
    if (steps < 50)
        throw DomainError("lattice_survival_comparison requires steps >= 50");
    if (paths < 1)
        throw DomainError("lattice_survival_comparison requires at least one path");
    SurvivalComparison out;
    for (std::size_t factor : {1u, 2u, 4u}) {
        const std::size_t n = steps * factor;
        const auto [lat, c] = lattice_from_model(p, n);
        const Decomposition dec = multiplicative_decompose(lat, c);
        RefinementLevel level{n, 0.0};
        std::vector<bool> moves(n);
        for (std::size_t k = 0; k < paths; ++k) {
            CounterRng gen(seed, k, RngStream::kAuxiliary);
            for (std::size_t i = 0; i < n; ++i)
                moves[i] = (gen() >> 63) != 0;
            level.max_relative_deviation =
                std::max(level.max_relative_deviation, survival_deviation(lat, dec, p, moves));
        }
        out.levels.push_back(level);
    }
    out.decreasing = true;
    for (std::size_t k = 1; k < out.levels.size(); ++k)
        if (!(out.levels[k].max_relative_deviation < out.levels[k - 1].max_relative_deviation))
            out.decreasing = false;
    return out;
}

std::vector<Check> to_checks(const DecompositionReport& report, const std::string& prefix)
{
    auto flag = [&](const std::string& name, bool ok) {
        Check c;
        c.name = prefix + "." + name;
        c.statistic = ok ? 0.0 : 1.0;
        c.threshold = 0.0;
        c.passed = ok;
        return c;
    };
    Check residual;
    residual.name = prefix + ".martingale_residual";
    residual.statistic = report.max_martingale_residual;
    residual.threshold = report.residual_tolerance;
    residual.passed = report.martingale_ok();
    return {residual,
            flag("non_increasing", report.non_increasing),
            flag("positive", report.positive),
            flag("starts_at_one", report.starts_at_one),
            flag("previsible", report.previsible),
            flag("strictness_equivalence", report.equivalence_holds())};
}

}  // namespace hazard
