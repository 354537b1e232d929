#pragma once

#include <cstddef>

namespace hazard {

/// Error function erf(x) = (2/sqrt(pi)) int_0^x exp(-t^2) dt.
///
/// Uses the positive-term series erf(x) = 2x/sqrt(pi) e^{-x^2} sum (2x^2)^k/(2k+1)!!
/// for |x| < 3 and the continued fraction for erfc beyond, so the result does
/// not depend on the platform libm's erf.
double erf(double x);

/// Complementary error function: relative accuracy for x >= 3 (continued
/// fraction), absolute accuracy of 1 - erf(x) below that.
double erfc(double x);

/// Standard normal distribution function.
double norm_cdf(double x);

/// Modified Bessel function of the first kind of order zero.
///
/// Power series for |x| <= 15, otherwise the integral representation
/// (1/pi) int_0^pi exp(x cos t) dt with 512 Gauss-Legendre nodes. Throws
/// std::overflow_error for |x| > 700.
double bessel_i0(double x);

/// Power series sum (x/2)^{2k}/(k!)^2, summed to convergence.
double bessel_i0_series(double x);

/// (1/pi) int_0^pi exp(x cos t) dt with an n-point Gauss-Legendre rule.
double bessel_i0_integral(double x, std::size_t nodes = 512);

struct QuadratureSpec {
    std::size_t nodes = 256;
    /// Relative agreement required between successive node counts.
    double tol = 1e-10;
    /// Absolute agreement that also counts as converged; keeps integrals that
    /// underflow towards zero from refining forever.
    double abs_tol = 0.0;
};

/// int_t^T exp(a (T - s)) exp(-w^2 / (2 (s - t))) / sqrt((T - s)(s - t)) ds
///
/// Evaluated after s = t + (T - t)(1 - cos u)/2, under which the weight
/// ds/sqrt((T - s)(s - t)) becomes du on [0, pi]. When w is small the Gaussian
/// factor switches on in a thin layer near u = 0, so that layer gets its own
/// panel. Node count doubles from spec.nodes until two successive estimates
/// agree to spec.tol (relative). Throws DomainError when t >= T.
double singular_integral(double a, double t, double T, double w, const QuadratureSpec& spec = {});

}  // namespace hazard
