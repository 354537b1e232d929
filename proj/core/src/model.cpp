#include "hazard/model.hpp"

#include <algorithm>
#include <cmath>

namespace hazard {

ModelParams validate_params(const ModelParams& p)
{
    auto require_positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ParamError(name, std::string(name) + " must be > 0");
    };
    if (!(p.r >= 0.0) || !std::isfinite(p.r))
        throw ParamError("r", "r must be >= 0");
    require_positive(p.T, "T");
    require_positive(p.sigma, "sigma");
    require_positive(p.s0, "s0");
    require_positive(p.lambda_plus, "lambda_plus");
    require_positive(p.lambda_minus, "lambda_minus");
    return p;
}

double riskless_bond(double t, const ModelParams& p) noexcept
{
    return std::exp(-p.r * (p.T - t));
}

TimeGrid::TimeGrid(double horizon, std::size_t steps)
    : horizon_(horizon), steps_(steps), dt_(horizon / static_cast<double>(steps))
{
    if (steps == 0)
        throw DomainError("time grid needs at least one step");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw DomainError("time grid horizon must be > 0");
}

double TimeGrid::time(std::size_t i) const
{
    if (i > steps_)
        throw std::out_of_range("time grid index out of range");
    if (i == steps_)
        return origin_ + horizon_;
    return origin_ + static_cast<double>(i) * dt_;
}

std::optional<std::size_t> TimeGrid::index_of(double t) const noexcept
{
    const double x = (t - origin_) / dt_;
    if (!(x > -0.5) || !(x < static_cast<double>(steps_) + 0.5))
        return std::nullopt;
    const auto i = static_cast<std::size_t>(std::llround(x));
    const double ti = i == steps_ ? origin_ + horizon_ : origin_ + static_cast<double>(i) * dt_;
    if (std::abs(ti - t) > 1e-9 * dt_)
        return std::nullopt;
    return i;
}

std::size_t TimeGrid::require_index(double t) const
{
    if (auto i = index_of(t))
        return *i;
    throw DomainError("time " + std::to_string(t) + " is not a grid node");
}

TimeGrid TimeGrid::shifted(double origin) const
{
    TimeGrid g = *this;
    g.origin_ = origin;
    return g;
}

double SurvivalPath::hazard(std::size_t i) const
{
    return -std::log(g.at(i));
}

DefaultTime DefaultTime::in_horizon(double tau)
{
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw DomainError("default time must be strictly positive");
    DefaultTime d;
    d.tau_ = tau;
    return d;
}

double DefaultTime::time() const
{
    if (!tau_)
        throw DomainError("default happens after the horizon");
    return *tau_;
}

std::size_t Scenario::observation(std::size_t grid_index) const
{
    auto it = std::lower_bound(observed.begin(), observed.end(), grid_index);
    if (it == observed.end() || *it != grid_index)
        throw DomainError("grid node " + std::to_string(grid_index) + " is not observed in this scenario");
    return static_cast<std::size_t>(it - observed.begin());
}

bool Scenario::is_observed(std::size_t grid_index) const noexcept
{
    return std::binary_search(observed.begin(), observed.end(), grid_index);
}

}  // namespace hazard
