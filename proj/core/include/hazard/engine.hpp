#pragma once

#include <vector>

#include "hazard/model.hpp"
#include "hazard/rng.hpp"

namespace hazard {

/// Brownian path on `grid` started at 0. Increments come from the Gaussian
/// substream of `rng`, one standard normal per step.
BrownianPath simulate_brownian(const TimeGrid& grid, const RngStream& rng);

/// Brownian path on `grid` started at level `w0` (used for conditional
/// pricing on a grid shifted to [t, T]).
BrownianPath simulate_brownian_from(const TimeGrid& grid, double w0, const RngStream& rng);

/// Stock under the Black-Scholes pricing measure:
/// S(t) = s0 exp((r - sigma^2/2) t + sigma W(t)).
std::vector<double> stock_path(const BrownianPath& w, const ModelParams& p);

/// Time spent at or above zero, left-endpoint rule:
/// gamma_plus[i+1] = gamma_plus[i] + dt 1{w[i] >= 0}.
std::vector<double> sojourn_plus(const BrownianPath& w);

/// G(t_i) = exp(-(lambda_plus - lambda_minus) gamma_plus[i] - lambda_minus (t_i - t_0)).
SurvivalPath survival_path(const BrownianPath& w, const ModelParams& p);

/// Inverse-transform coupling tau = inf{t : G(t) <= u}, with G interpolated
/// exponentially (constant hazard) inside each grid cell. Returns
/// beyond_horizon when u < G(T). Throws DomainError unless 0 < u < 1.
DefaultTime sample_default_time(const SurvivalPath& g, double u);

}  // namespace hazard
