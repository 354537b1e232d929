#pragma once

#include <cstddef>
#include <vector>

namespace hazard {

/// Nodes and weights of an n-point rule on its reference interval.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss-Legendre rule on [-1, 1]. Rules are computed once per size and
/// cached; the returned reference stays valid for the life of the program.
const QuadratureRule& gauss_legendre(std::size_t n);

/// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
const QuadratureRule& gauss_hermite(std::size_t n);

/// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <class F>
double integrate_gl(F&& f, double a, double b, std::size_t n)
{
    const auto& rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k)
        sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return half * sum;
}

/// E[f(mean + sd Z)] for standard normal Z, by Gauss-Hermite quadrature.
template <class F>
double gaussian_expectation(F&& f, double mean, double sd, std::size_t n = 64)
{
    constexpr double inv_sqrt_pi = 0.56418958354775628695;
    constexpr double sqrt2 = 1.41421356237309504880;
    const auto& rule = gauss_hermite(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k)
        sum += rule.weights[k] * f(mean + sqrt2 * sd * rule.nodes[k]);
    return inv_sqrt_pi * sum;
}

}  // namespace hazard
