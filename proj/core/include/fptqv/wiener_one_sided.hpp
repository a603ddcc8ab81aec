#pragma once

// First-passage time of a standard Wiener process to a constant one-sided
// boundary g > 0: the Levy distribution. Closed forms for the cdf, the
// density, the quantile function, and the density evaluated at the quantile.

namespace fptqv {

struct OneSidedBoundary {
    double g; // boundary level, > 0

    explicit OneSidedBoundary(double level);
};

/// P_g(t) = 1 - Phi(g/sqrt(t)) + Phi(-g/sqrt(t)), with P_g(0) = 0.
/// Computed as erfc(g / sqrt(2t)), which is exact in both tails.
/// Throws domain_error for t < 0.
double levy_cdf(const OneSidedBoundary& b, double t);

/// f_g(t) = g / sqrt(2 pi t^3) * exp(-g^2 / (2t)), with f_g(0) = 0.
double levy_pdf(const OneSidedBoundary& b, double t);

/// Quantile function: the t with levy_cdf(t) = p, i.e. g^2 / (2 erfinv(1-p)^2),
/// with value 0 at p = 0.
///
/// Throws domain_error for p outside [0, 1) and saturation_error for
/// p > 1 - 1e-14, where the result would be numerically meaningless; callers
/// that walk a cdf toward 1 must see that failure explicitly.
double levy_cdf_inverse(const OneSidedBoundary& b, double p);

/// f_g(levy_cdf_inverse(p)) by its closed form
/// 2/(g^2 sqrt(pi)) * erfinv(1-p)^3 * exp(-erfinv(1-p)^2), with value 0 at p = 0.
/// Avoids the double rounding of composing pdf and quantile.
double levy_pdf_at_inverse(const OneSidedBoundary& b, double p);

} // namespace fptqv
