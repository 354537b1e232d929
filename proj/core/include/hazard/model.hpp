#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hazard {

/// Raised when a model parameter violates its invariant. `field()` names it.
class ParamError : public std::invalid_argument {
public:
    ParamError(std::string field, const std::string& what)
        : std::invalid_argument(what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Raised when a function is evaluated outside its mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Market constants: a riskless bond growing at rate r, a Black-Scholes stock
/// (sigma, s0) and a two-regime hazard rate that is lambda_plus while the
/// driving Brownian motion is at or above zero and lambda_minus below it.
struct ModelParams {
    double r = 0.1;
    double T = 2.0;
    double sigma = 0.2;
    double s0 = 100.0;
    double lambda_plus = 0.5;
    double lambda_minus = 0.1;

    /// Parameter set of the worked two-regime example (T=2, r=0.1, 0.5/0.1).
    static ModelParams reference() { return {}; }

    bool constant_hazard() const noexcept { return lambda_plus == lambda_minus; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Returns `p` unchanged, or throws ParamError naming the first offending field.
ModelParams validate_params(const ModelParams& p);

/// Price of the non-defaultable zero-coupon bond, B(t,T) = exp(-r (T - t)).
double riskless_bond(double t, const ModelParams& p) noexcept;

/// Uniform partition of [0, horizon]. The last node is exactly `horizon`.
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t steps);

    std::size_t steps() const noexcept { return steps_; }
    std::size_t size() const noexcept { return steps_ + 1; }
    double dt() const noexcept { return dt_; }
    double horizon() const noexcept { return horizon_; }
    double origin() const noexcept { return origin_; }

    /// Node time t_i = origin + i dt, with t_steps = origin + horizon exactly.
    double time(std::size_t i) const;

    /// Index of the node at time `t`, if `t` is within 1e-9 dt of one.
    std::optional<std::size_t> index_of(double t) const noexcept;
    /// Like index_of but throws DomainError when `t` is off the grid.
    std::size_t require_index(double t) const;

    /// The same partition translated to start at `origin`.
    TimeGrid shifted(double origin) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double origin_ = 0.0;
    double horizon_;
    std::size_t steps_;
    double dt_;
};

struct BrownianPath {
    TimeGrid grid;
    std::vector<double> w;  // w[0] is the starting level (0 for a fresh path)
};

/// Survival process G and the sojourn time above zero on a grid.
struct SurvivalPath {
    TimeGrid grid;
    std::vector<double> g;
    std::vector<double> gamma_plus;

    double gamma_minus(std::size_t i) const { return grid.time(i) - grid.origin() - gamma_plus.at(i); }
    /// Hazard process -log G.
    double hazard(std::size_t i) const;
};

/// Default time: either a value in (0, T] or "after the horizon".
class DefaultTime {
public:
    static DefaultTime in_horizon(double tau);
    static DefaultTime beyond_horizon() noexcept { return DefaultTime{}; }

    bool is_in_horizon() const noexcept { return tau_.has_value(); }
    /// The default time; throws DomainError when default is beyond the horizon.
    double time() const;

    /// 1_{t < tau}
    bool survives(double t) const noexcept { return !tau_ || t < *tau_; }
    /// I(t) = 1_{tau <= t}
    bool defaulted_by(double t) const noexcept { return !survives(t); }

    friend bool operator==(const DefaultTime&, const DefaultTime&) = default;

private:
    DefaultTime() = default;
    std::optional<double> tau_;
};

/// One joint draw of (W, tau) with the derived stock and bond prices.
///
/// The path arrays (w, s, survival) cover every grid node. The pre-default
/// value c and the defaultable bond price d are evaluated on the `observed`
/// subset of grid indices only; that subset always contains 0 and the
/// terminal node.
struct Scenario {
    BrownianPath w;
    DefaultTime tau = DefaultTime::beyond_horizon();
    std::vector<double> s;
    SurvivalPath survival;
    std::vector<std::size_t> observed;
    std::vector<double> c;
    std::vector<double> d;

    const TimeGrid& grid() const noexcept { return w.grid; }
    /// Position of grid node `i` within `observed`; throws if not observed.
    std::size_t observation(std::size_t grid_index) const;
    bool is_observed(std::size_t grid_index) const noexcept;
    double c_at(std::size_t grid_index) const { return c[observation(grid_index)]; }
    double d_at(std::size_t grid_index) const { return d[observation(grid_index)]; }
};

}  // namespace hazard
