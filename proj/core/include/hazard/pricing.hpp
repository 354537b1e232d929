#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "hazard/model.hpp"
#include "hazard/parallel.hpp"
#include "hazard/rng.hpp"
#include "hazard/special.hpp"

namespace hazard {

enum class PriceMethod { closed_form, monte_carlo };

struct PriceResult {
    double value = 0.0;
    double std_error = 0.0;
    PriceMethod method = PriceMethod::closed_form;
    std::size_t n_paths = 0;
};

/// A candidate pre-default value c(t, W(t)). The two-regime model supplies
/// the closed form; tests and arbitrage demos plug in deliberately broken ones.
using PreDefaultFn = std::function<double(double t, double w)>;

/// Quadrature used by the closed-form pricer. The node count doubles until
/// successive estimates agree to `tol`, so starting small only costs accuracy
/// when the integrand actually needs the extra nodes. The integral enters c
/// scaled by at most 1/pi, so an absolute 1e-14 is below double noise in c.
inline constexpr QuadratureSpec kPricingQuadrature{16, 1e-11, 1e-14};

/// Q(t < tau) = exp(-(l+ + l-) t / 2) I0((l+ - l-) t / 2).
double survival_probability(double t, const ModelParams& p);

/// Time-0 price of the zero-recovery bond, exp(-rT) Q(T < tau).
PriceResult bond_price_0(const ModelParams& p);

/// Pre-default value c(t) given W(t) = w, from the two-branch closed form
/// (erf term plus the singular integral). Exactly 1 at t = T; under constant
/// hazard the two terms sum to one and the single exponential is returned.
double pre_default_value(double t, double w, const ModelParams& p,
                         const QuadratureSpec& spec = kPricingQuadrature);

/// The closed form as a PreDefaultFn bound to `p`.
PreDefaultFn closed_form_pricer(const ModelParams& p);

struct McOptions {
    /// Steps on the shifted grid [t, T]; 0 means one step per 1e-3 time units.
    std::size_t steps = 0;
    Parallelism parallel{};
};

/// Monte Carlo estimate of c(t) given W(t) = w: mean over `n` Brownian
/// segments on [t, T] started at w of
/// exp(-(r + l-)(T - t)) exp(-(l+ - l-)(gamma_plus(T) - gamma_plus(t))).
/// Path k uses rng.child(k).
PriceResult pre_default_value_mc(double t, double w, const ModelParams& p, std::size_t n,
                                 const RngStream& rng, const McOptions& opts = {});

/// Pre-default factor exp(-(r + lambda)(T - t)) under constant hazard lambda.
double constant_hazard_curve(double t, double lambda, const ModelParams& p);

/// The two single-regime curves exp(-(r + l+)(T - t)) and exp(-(r + l-)(T - t))
/// bounding every sample path of c; returned as (lower, upper).
std::pair<double, double> envelope(double t, const ModelParams& p);

std::string to_string(PriceMethod m);

}  // namespace hazard
