#pragma once

// Scalar special functions used by every distribution formula in the library:
// the standard normal cdf, the error function and its complement, and their
// inverses. All functions are pure and thread-safe.

namespace fptqv::specfun {

/// Standard normal cdf Phi(x). Saturates to 0/1 in the far tails.
double std_normal_cdf(double x);

/// Error function, erf(x) = 2/sqrt(pi) * integral_0^x exp(-u^2) du.
double erf(double x);

/// Complementary error function, erfc(x) = 1 - erf(x). Accurate in the right tail.
double erfc(double x);

/// Inverse error function on (-1, 1).
///
/// Rational initial approximation polished by Newton steps against erf;
/// relative error is ~1e-15 over |p| <= 1 - 1e-12. For |p| > 0.9 the value is
/// computed through the complementary channel erfcinv(1 - |p|), which works on
/// the log of the tail and avoids cancellation near +-1.
/// Throws domain_error for |p| >= 1.
double erfinv(double p);

/// Inverse complementary error function on (0, 2): erfc(erfcinv(q)) = q.
///
/// Well-conditioned for arbitrarily small q (down to the subnormal range),
/// which is what the first-passage quantile formulas need as the cdf
/// approaches 1. Throws domain_error for q <= 0 or q >= 2.
double erfcinv(double q);

} // namespace fptqv::specfun
