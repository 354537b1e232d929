#include "hazard/special.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hazard/model.hpp"
#include "hazard/quadrature.hpp"

namespace hazard {
namespace {

constexpr double kTwoOverSqrtPi = 1.12837916709551257390;
constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kSeriesSplit = 3.0;

// erf(x) = 2x/sqrt(pi) e^{-x^2} sum_k (2x^2)^k / (1*3*...*(2k+1)); all terms positive.
double erf_series(double x)
{
    const double x2 = x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= 2.0 * x2 / (2.0 * k + 1.0);
        sum += term;
        if (term <= sum * 1e-17)
            break;
    }
    return kTwoOverSqrtPi * x * std::exp(-x2) * sum;
}

// erfc(x) for x >= kSeriesSplit via modified Lentz on
// x + (1/2)/(x + 1/(x + (3/2)/(x + ...))).
double erfc_continued_fraction(double x)
{
    // exp(-x^2) underflows past 27, which also covers x = inf.
    if (x > 27.0)
        return 0.0;
    constexpr double tiny = 1e-300;
    double f = x;
    double c = x;
    double d = 0.0;
    for (int k = 1; k < 5000; ++k) {
        const double a = 0.5 * k;
        d = x + a * d;
        if (d == 0.0)
            d = tiny;
        c = x + a / c;
        if (c == 0.0)
            c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            break;
    }
    return kInvSqrtPi * std::exp(-x * x) / f;
}

}  // namespace

double erf(double x)
{
    if (std::isnan(x))
        return x;
    const double ax = std::abs(x);
    if (ax < kSeriesSplit)
        return erf_series(x);
    const double v = 1.0 - erfc_continued_fraction(ax);
    return x < 0 ? -v : v;
}

double erfc(double x)
{
    if (std::isnan(x))
        return x;
    if (x >= kSeriesSplit)
        return erfc_continued_fraction(x);
    if (x <= -kSeriesSplit)
        return 2.0 - erfc_continued_fraction(-x);
    return 1.0 - erf_series(x);
}

double norm_cdf(double x)
{
    return 0.5 * erfc(-x / std::numbers::sqrt2);
}

double bessel_i0_series(double x)
{
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 1000; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term <= sum * 1e-17)
            break;
    }
    return sum;
}

double bessel_i0_integral(double x, std::size_t nodes)
{
    auto integrand = [x](double theta) { return std::exp(x * std::cos(theta)); };
    return integrate_gl(integrand, 0.0, std::numbers::pi, nodes) / std::numbers::pi;
}

double bessel_i0(double x)
{
    const double ax = std::abs(x);
    if (ax > 700.0)
        throw std::overflow_error("bessel_i0: |x| > 700 exceeds the double range");
    if (ax <= 15.0)
        return bessel_i0_series(ax);
    return bessel_i0_integral(ax, 512);
}

namespace {

// Gauss-Legendre rule mapped to [0, pi] with the half-angle factors of the
// substitution tabulated, so the full-range panel costs one exp per node.
struct HalfAngleRule {
    std::vector<double> weight;
    std::vector<double> cos2;
    std::vector<double> sin2;
};

const HalfAngleRule& half_angle_rule(std::size_t n)
{
    static std::map<std::size_t, std::unique_ptr<HalfAngleRule>> cache;
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        const auto& gl = gauss_legendre(n);
        auto rule = std::make_unique<HalfAngleRule>();
        const double half = 0.5 * std::numbers::pi;
        for (std::size_t k = 0; k < n; ++k) {
            const double u = half + half * gl.nodes[k];
            const double sh = std::sin(0.5 * u);
            const double ch = std::cos(0.5 * u);
            rule->weight.push_back(half * gl.weights[k]);
            rule->cos2.push_back(ch * ch);
            rule->sin2.push_back(sh * sh);
        }
        slot = std::move(rule);
    }
    return *slot;
}

}  // namespace

double singular_integral(double a, double t, double T, double w, const QuadratureSpec& spec)
{
    if (!(t < T))
        throw DomainError("singular_integral requires t < T");
    if (spec.nodes < 8 || !(spec.tol > 0.0) || !(spec.abs_tol >= 0.0))
        throw DomainError("quadrature spec needs nodes >= 8, tol > 0 and abs_tol >= 0");

    const double len = T - t;
    const double w2 = w * w;
    const double slope = a * len;
    const double scale = w2 / (2.0 * len);
    // With s - t = len sin^2(u/2) and T - s = len cos^2(u/2) the integrand in u
    // is exp(a len cos^2(u/2) - w^2 / (2 len sin^2(u/2))).
    auto integrand = [slope, scale](double cos2, double sin2) {
        if (scale > 0.0 && sin2 == 0.0)
            return 0.0;
        return std::exp(slope * cos2 - (scale > 0.0 ? scale / sin2 : 0.0));
    };
    auto panel = [&](double lo, double hi, std::size_t n) {
        return integrate_gl(
            [&](double u) {
                const double sh = std::sin(0.5 * u);
                const double ch = std::cos(0.5 * u);
                return integrand(ch * ch, sh * sh);
            },
            lo, hi, n);
    };

    // The Gaussian factor is about exp(-(layer/u)^2): below layer/6 it is
    // under 1e-15 and the interval is dropped; above it, panels grow by a
    // factor of 4 so each one sees the singularity at u = 0 from a distance
    // comparable to its own width and Gauss-Legendre converges geometrically.
    const double layer = std::abs(w) * std::sqrt(2.0 / len);
    std::vector<double> breaks;
    if (w2 > 0.0 && layer / 6.0 < 0.25 * std::numbers::pi) {
        for (double b = layer / 6.0; b < std::numbers::pi; b *= 4.0)
            breaks.push_back(b);
        breaks.push_back(std::numbers::pi);
    }

    auto estimate = [&](std::size_t n) {
        if (breaks.empty()) {
            const auto& rule = half_angle_rule(n);
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                sum += rule.weight[k] * integrand(rule.cos2[k], rule.sin2[k]);
            return sum;
        }
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
            sum += panel(breaks[k], breaks[k + 1], n);
        return sum;
    };

    constexpr std::size_t max_nodes = std::size_t{1} << 15;
    std::size_t n = spec.nodes;
    double prev = estimate(n);
    double cur = prev;
    while (n < max_nodes) {
        n *= 2;
        cur = estimate(n);
        if (std::abs(cur - prev) <= spec.tol * std::abs(cur) + spec.abs_tol)
            break;
        prev = cur;
    }
    return cur;
}

}  // namespace hazard
