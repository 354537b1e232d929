#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "hazard/special.hpp"
#include "oracles.hpp"

using namespace hazard;

TEST(Erf, Examples)
{
    EXPECT_EQ(hazard::erf(0.0), 0.0);
    EXPECT_NEAR(hazard::erf(1.0), 0.8427007929497149, 1e-15);
    EXPECT_NEAR(hazard::erf(6.0), 1.0, 1e-12);
    EXPECT_EQ(hazard::erf(-1.0), -hazard::erf(1.0));
}

TEST(Erf, MaclaurinSeriesOracle)
{
    // Alternating series summed in long double, independent of the
    // positive-term series used by the library.
    auto maclaurin = [](long double x) {
        long double term = x;
        long double sum = x;
        for (int k = 1; k < 200; ++k) {
            term *= -x * x / k;
            sum += term / (2 * k + 1);
        }
        return static_cast<double>(sum * 2.0L / std::sqrt(std::numbers::pi_v<long double>));
    };
    for (double x = -2.5; x <= 2.5; x += 0.125)
        EXPECT_NEAR(hazard::erf(x), maclaurin(x), 5e-16) << x;
}

TEST(Erf, AgreesWithBoostAcrossTheSplit)
{
    for (double x = -8.0; x <= 8.0; x += 0.0625) {
        EXPECT_NEAR(hazard::erf(x), boost::math::erf(x), 1e-15) << x;
        const double ref = boost::math::erfc(x);
        // relative accuracy in the upper tail, absolute elsewhere
        const double tol = x >= 3.0 ? 1e-14 * ref : 1e-15;
        EXPECT_NEAR(hazard::erfc(x), ref, tol) << x;
    }
    for (double x = 8.0; x < 26.0; x += 0.5)
        EXPECT_NEAR(hazard::erfc(x) / boost::math::erfc(x), 1.0, 1e-13) << x;
}

TEST(Erf, InfiniteArguments)
{
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_EQ(hazard::erf(inf), 1.0);
    EXPECT_EQ(hazard::erf(-inf), -1.0);
    EXPECT_EQ(hazard::erfc(inf), 0.0);
    EXPECT_EQ(norm_cdf(-inf), 0.0);
    EXPECT_EQ(norm_cdf(inf), 1.0);
}

TEST(Erf, StrictlyIncreasingOnMesh)
{
    double prev = hazard::erf(-5.9);
    for (double x = -5.8; x <= 5.9; x += 0.1) {
        const double v = hazard::erf(x);
        EXPECT_LT(prev, v) << x;
        prev = v;
    }
}

TEST(NormCdf, Symmetry)
{
    for (double x = 0.0; x < 6.0; x += 0.25)
        EXPECT_NEAR(norm_cdf(x) + norm_cdf(-x), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(norm_cdf(0.0), 0.5);
}

TEST(BesselI0, Examples)
{
    EXPECT_EQ(bessel_i0(0.0), 1.0);
    EXPECT_NEAR(bessel_i0(0.4), 1.040402, 5e-7);
    EXPECT_EQ(bessel_i0(-0.4), bessel_i0(0.4));
}

TEST(BesselI0, TenTermSeriesAtPointFour)
{
    double sum = 0.0;
    double term = 1.0;
    for (int k = 0; k < 10; ++k) {
        if (k > 0)
            term *= 0.04 / (k * k);
        sum += term;
    }
    EXPECT_NEAR(bessel_i0(0.4), sum, 1e-15);
}

TEST(BesselI0, SeriesAndIntegralAgree)
{
    for (double x = -10.0; x <= 10.0; x += 0.05) {
        const double s = bessel_i0_series(x);
        const double i = bessel_i0_integral(x);
        EXPECT_LE(std::abs(s - i), 1e-10 * s) << x;
    }
}

TEST(BesselI0, AgreesWithBoost)
{
    for (double x : {0.1, 1.0, 5.0, 14.9, 15.1, 30.0, 200.0, 699.0})
        EXPECT_NEAR(bessel_i0(x) / boost::math::cyl_bessel_i(0, x), 1.0, 1e-13) << x;
}

TEST(BesselI0, OverflowBeyondSevenHundred)
{
    EXPECT_NO_THROW(bessel_i0(700.0));
    EXPECT_THROW(bessel_i0(700.5), std::overflow_error);
    EXPECT_THROW(bessel_i0(-701.0), std::overflow_error);
}

TEST(SingularIntegral, VanishesForLargeLevel)
{
    EXPECT_NEAR(singular_integral(0.0, 0.0, 1.0, 40.0), 0.0, 1e-12);
    EXPECT_NEAR(singular_integral(0.0, 0.0, 1.0, -40.0), 0.0, 1e-12);
}

TEST(SingularIntegral, FlatIntegrandIsPi)
{
    EXPECT_NEAR(singular_integral(0.0, 0.0, 1.0, 0.0), std::numbers::pi, 1e-12);
    EXPECT_NEAR(singular_integral(0.0, 0.3, 2.0, 0.0), std::numbers::pi, 1e-12);
}

TEST(SingularIntegral, BesselIdentityAtZeroLevel)
{
    for (double a : {-1.5, -0.4, 0.1, 0.4, 2.0}) {
        for (double T : {0.5, 1.0, 2.0}) {
            const double expect = std::numbers::pi * std::exp(a * T / 2) * bessel_i0(a * T / 2);
            EXPECT_NEAR(singular_integral(a, 0.0, T, 0.0), expect, 1e-11 * expect) << a << " " << T;
        }
    }
    const double ref = std::numbers::pi * std::exp(0.4) * bessel_i0(0.4);
    EXPECT_NEAR(ref, 4.87606, 5e-5);
    EXPECT_NEAR(singular_integral(0.4, 0.0, 2.0, 0.0), ref, 1e-12);
}

TEST(SingularIntegral, AgreesWithKronrodInAnIndependentVariable)
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> ua(-1.0, 1.0), ut(0.0, 1.5), ulen(0.05, 1.0), uw(0.05, 2.0);
    std::bernoulli_distribution sign(0.5);
    for (int k = 0; k < 40; ++k) {
        const double a = ua(gen);
        const double t = ut(gen);
        const double T = t + ulen(gen);
        const double w = sign(gen) ? uw(gen) : -uw(gen);
        const double ref = oracle::singular_integral_kronrod(a, t, T, w);
        EXPECT_NEAR(singular_integral(a, t, T, w), ref, 1e-11 * ref + 1e-300) << a << " " << t << " " << T << " " << w;
    }
}

TEST(SingularIntegral, DoublingNodesStaysWithinTolerance)
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> ua(-1.0, 1.0), ut(0.0, 1.5), ulen(1e-3, 1.0), uw(-3.0, 3.0);
    for (int k = 0; k < 60; ++k) {
        const double a = ua(gen);
        const double t = ut(gen);
        const double T = t + ulen(gen);
        const double w = uw(gen);
        const QuadratureSpec spec{64, 1e-10};
        const QuadratureSpec doubled{128, 1e-10};
        const double x = singular_integral(a, t, T, w, spec);
        const double y = singular_integral(a, t, T, w, doubled);
        EXPECT_LE(std::abs(x - y), 1e-10 * std::abs(y) + 1e-300) << a << " " << t << " " << T << " " << w;
    }
}

TEST(SingularIntegral, RejectsEmptyInterval)
{
    EXPECT_THROW(singular_integral(0.1, 1.0, 1.0, 0.0), DomainError);
    EXPECT_THROW(singular_integral(0.1, 1.5, 1.0, 0.0), DomainError);
}
