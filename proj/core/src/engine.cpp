#include "hazard/engine.hpp"

#include <algorithm>
#include <cmath>

namespace hazard {

BrownianPath simulate_brownian(const TimeGrid& grid, const RngStream& rng)
{
    return simulate_brownian_from(grid, 0.0, rng);
}

BrownianPath simulate_brownian_from(const TimeGrid& grid, double w0, const RngStream& rng)
{
    BrownianPath path{grid, std::vector<double>(grid.size())};
    auto gen = rng.engine(RngStream::kGaussian);
    const double sd = std::sqrt(grid.dt());
    path.w[0] = w0;
    for (std::size_t i = 1; i < path.w.size(); ++i)
        path.w[i] = path.w[i - 1] + sd * gen.normal();
    return path;
}

std::vector<double> stock_path(const BrownianPath& w, const ModelParams& p)
{
    std::vector<double> s(w.w.size());
    const double drift = p.r - 0.5 * p.sigma * p.sigma;
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = p.s0 * std::exp(drift * w.grid.time(i) + p.sigma * w.w[i]);
    return s;
}

std::vector<double> sojourn_plus(const BrownianPath& w)
{
    std::vector<double> gamma(w.w.size(), 0.0);
    const double dt = w.grid.dt();
    std::size_t above = 0;
    for (std::size_t i = 1; i < gamma.size(); ++i) {
        if (w.w[i - 1] >= 0.0)
            ++above;
        gamma[i] = static_cast<double>(above) * dt;
    }
    // keep gamma_plus <= t_i despite the terminal node being set to T exactly
    const std::size_t last = gamma.size() - 1;
    gamma[last] = std::min(gamma[last], w.grid.time(last) - w.grid.origin());
    return gamma;
}

SurvivalPath survival_path(const BrownianPath& w, const ModelParams& p)
{
    SurvivalPath out{w.grid, std::vector<double>(w.w.size()), sojourn_plus(w)};
    const double spread = p.lambda_plus - p.lambda_minus;
    for (std::size_t i = 0; i < out.g.size(); ++i) {
        const double elapsed = w.grid.time(i) - w.grid.origin();
        out.g[i] = std::exp(-spread * out.gamma_plus[i] - p.lambda_minus * elapsed);
    }
    return out;
}

DefaultTime sample_default_time(const SurvivalPath& g, double u)
{
    if (!(u > 0.0 && u < 1.0))
        throw DomainError("default-time uniform must lie in (0, 1)");
    const auto& G = g.g;
    const std::size_t last = G.size() - 1;
    if (u < G[last])
        return DefaultTime::beyond_horizon();
    // first node with G <= u; G is strictly decreasing
    const auto it = std::lower_bound(G.begin(), G.end(), u, [](double gi, double v) { return gi > v; });
    const auto k = static_cast<std::size_t>(it - G.begin());
    if (G[k] == u || k == 0)
        return DefaultTime::in_horizon(g.grid.time(k));
    const double t0 = g.grid.time(k - 1);
    const double t1 = g.grid.time(k);
    const double log_hi = std::log(G[k - 1]);
    const double log_lo = std::log(G[k]);
    const double frac = (log_hi - std::log(u)) / (log_hi - log_lo);
    const double tau = std::clamp(t0 + frac * (t1 - t0), t0, t1);
    return DefaultTime::in_horizon(tau);
}

}  // namespace hazard
