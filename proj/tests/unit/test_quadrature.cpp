#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hazard/quadrature.hpp"

using namespace hazard;

TEST(GaussLegendre, ExactForPolynomialsUpToDegreeTwoNMinusOne)
{
    for (std::size_t n : {2u, 5u, 16u, 64u}) {
        const auto deg = static_cast<int>(2 * n - 1);
        const double got = integrate_gl([deg](double x) { return std::pow(x, deg - 1); }, 0.0, 1.0, n);
        EXPECT_NEAR(got, 1.0 / deg, 1e-14) << n;
    }
}

TEST(GaussLegendre, WeightsSumToTwoAndNodesAreSymmetric)
{
    const auto& rule = gauss_legendre(33);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        sum += rule.weights[k];
        EXPECT_NEAR(rule.nodes[k], -rule.nodes[rule.size() - 1 - k], 1e-15);
    }
    EXPECT_NEAR(sum, 2.0, 1e-14);
}

TEST(GaussLegendre, RulesAreCached)
{
    EXPECT_EQ(&gauss_legendre(40), &gauss_legendre(40));
}

TEST(GaussHermite, GaussianMoments)
{
    EXPECT_NEAR(gaussian_expectation([](double) { return 1.0; }, 0.0, 1.0), 1.0, 1e-14);
    EXPECT_NEAR(gaussian_expectation([](double x) { return x * x; }, 0.3, 2.0), 4.09, 1e-12);
    EXPECT_NEAR(gaussian_expectation([](double x) { return std::pow(x, 4); }, 0.0, 1.0), 3.0, 1e-12);
    EXPECT_NEAR(gaussian_expectation([](double x) { return std::exp(x); }, 0.0, 0.5), std::exp(0.125), 1e-13);
}

TEST(GaussHermite, WeightsSumToRootPi)
{
    const auto& rule = gauss_hermite(64);
    double sum = 0.0;
    for (double w : rule.weights)
        sum += w;
    EXPECT_NEAR(sum, std::sqrt(std::numbers::pi), 1e-13);
}
