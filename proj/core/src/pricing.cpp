#include "hazard/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hazard/engine.hpp"
#include "hazard/stats.hpp"

namespace hazard {

double survival_probability(double t, const ModelParams& p)
{
    if (!(t >= 0.0))
        throw DomainError("survival_probability requires t >= 0");
    const double mean_rate = 0.5 * (p.lambda_plus + p.lambda_minus);
    const double half_spread = 0.5 * (p.lambda_plus - p.lambda_minus);
    return std::exp(-mean_rate * t) * bessel_i0(half_spread * t);
}

PriceResult bond_price_0(const ModelParams& p)
{
    validate_params(p);
    return {std::exp(-p.r * p.T) * survival_probability(p.T, p), 0.0, PriceMethod::closed_form, 0};
}

double pre_default_value(double t, double w, const ModelParams& p, const QuadratureSpec& spec)
{
    if (!(t >= 0.0 && t <= p.T))
        throw DomainError("pre_default_value requires 0 <= t <= T");
    const double len = p.T - t;
    if (len < 1e-12)
        return 1.0;
    // One regime only: the crossing terms sum to exactly one.
    if (p.constant_hazard())
        return std::exp(-(p.r + p.lambda_plus) * len);
    // Above zero the process currently accrues lambda_plus; the integral term
    // carries the chance of crossing into the other regime.
    const bool above = w >= 0.0;
    const double here = above ? p.lambda_plus : p.lambda_minus;
    const double there = above ? p.lambda_minus : p.lambda_plus;
    const double prefactor = std::exp(-(p.r + here) * len);
    const double crossing = hazard::erf(std::abs(w) / std::sqrt(2.0 * len));
    const double integral = singular_integral(here - there, t, p.T, w, spec);
    return prefactor * (crossing + integral / std::numbers::pi);
}

PreDefaultFn closed_form_pricer(const ModelParams& p)
{
    return [p](double t, double w) { return pre_default_value(t, w, p); };
}

PriceResult pre_default_value_mc(double t, double w, const ModelParams& p, std::size_t n,
                                 const RngStream& rng, const McOptions& opts)
{
    if (!(t >= 0.0 && t < p.T))
        throw DomainError("pre_default_value_mc requires 0 <= t < T");
    if (n < 100)
        throw DomainError("pre_default_value_mc requires at least 100 paths");
    const double len = p.T - t;
    std::size_t steps = opts.steps;
    if (steps == 0)
        steps = std::max<std::size_t>(10, static_cast<std::size_t>(std::llround(len / 1e-3)));
    const TimeGrid grid = TimeGrid(len, steps).shifted(t);
    const double spread = p.lambda_plus - p.lambda_minus;
    const double base = std::exp(-(p.r + p.lambda_minus) * len);

    const auto values = parallel_map<double>(n, opts.parallel.workers, [&](std::size_t k) {
        const BrownianPath path = simulate_brownian_from(grid, w, rng.child(k));
        const double gamma = sojourn_plus(path).back();
        return std::exp(-spread * gamma);
    });
    // The discount stays outside the average so a constant integrand gives
    // an exact mean and a zero standard error.
    const Estimate e = sample_mean(values);
    return {base * e.mean, base * e.se, PriceMethod::monte_carlo, n};
}

double constant_hazard_curve(double t, double lambda, const ModelParams& p)
{
    if (!(t >= 0.0 && t <= p.T))
        throw DomainError("constant_hazard_curve requires 0 <= t <= T");
    if (!(lambda > 0.0))
        throw DomainError("constant_hazard_curve requires lambda > 0");
    return std::exp(-(p.r + lambda) * (p.T - t));
}

std::pair<double, double> envelope(double t, const ModelParams& p)
{
    const double a = constant_hazard_curve(t, p.lambda_plus, p);
    const double b = constant_hazard_curve(t, p.lambda_minus, p);
    return {std::min(a, b), std::max(a, b)};
}

std::string to_string(PriceMethod m)
{
    return m == PriceMethod::closed_form ? "closed_form" : "monte_carlo";
}

}  // namespace hazard
