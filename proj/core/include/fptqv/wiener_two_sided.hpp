#pragma once

#include <cstddef>

// First-passage time of a standard Wiener process out of a corridor (h, g),
// h < 0 < g, via the Anderson image-expansion series, plus a guaranteed
// monotone numeric inverse of the cdf.

namespace fptqv {

struct TwoSidedBoundary {
    double g; // upper level, > 0
    double h; // lower level, < 0

    TwoSidedBoundary(double upper, double lower);
};

/// Truncation control for the infinite image series.
struct SeriesControl {
    double term_tol = 1e-16;        // absolute per-term cutoff beyond the base window
    std::size_t max_terms = 1'000'000;
};

/// The image series ss_t(v, w) = sum_k (w - v + 2kw) / (sqrt(2 pi) t^{3/2})
/// * exp(-(w - v + 2kw)^2 / 2t) over all integers k, for 0 < v < w.
///
/// The sum always includes every k with |w - v + 2kw| <= 8.3 sqrt(t) + w and
/// extends outward while terms stay above ctl.term_tol. Throws domain_error
/// unless 0 < v < w and t > 0, convergence_error past ctl.max_terms.
double ss_density(double t, double v, double w, const SeriesControl& ctl = {});

/// Exit density f_{g,h}(t) = ss_t(g, g-h) + ss_t(-h, g-h); 0 at t = 0.
double two_sided_pdf(const TwoSidedBoundary& b, double t, const SeriesControl& ctl = {});

/// Exit cdf P_{g,h}(t); 0 at t = 0, clamped into [0, 1] after summation.
///
/// Each series term is integrated in time as
///   int_0^t a / sqrt(2 pi x^3) exp(-a^2 / 2x) dx = 2 sign(a) Phi(-|a| / sqrt(t)),
/// which decays in both tail directions of k. (The term-wise form printed as
/// "4 - 2 Phi - 2 Phi" matches this for a > 0 but does not decay for k -> -inf;
/// the signed integral is the convergent completion and is validated against
/// quadrature of the density and against Monte Carlo.)
double two_sided_cdf(const TwoSidedBoundary& b, double t, const SeriesControl& ctl = {});

/// The unique t with two_sided_cdf(t) = p, by bracketed monotone root-finding;
/// 0 at p = 0. The bracket comes from the one-sided containment bounds
///   max(P_g, P_{|h|}) <= P_{g,h} <= P_g + P_{|h|} <= 2 P_{min(g,|h|)}.
/// Throws domain_error for p outside [0, 1), saturation_error past 1 - 1e-14.
double two_sided_cdf_inverse(const TwoSidedBoundary& b, double p,
                             const SeriesControl& ctl = {});

} // namespace fptqv
