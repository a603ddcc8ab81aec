#include "fptqv/wiener_two_sided.hpp"

#include "fptqv/errors.hpp"
#include "fptqv/roots.hpp"
#include "fptqv/specfun.hpp"
#include "fptqv/wiener_one_sided.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace fptqv {

namespace {

// Window half-width multiplier: 2 Phi(-8.3) < 1e-16, so every term outside
// |a| <= 8.3 sqrt(t) + w is below double epsilon relative to the leading one.
constexpr double window_z = 8.3;

// Sums term(a_k) over all integers k with a_k = head + 2k*w. All k inside the
// +-R window are included unconditionally; beyond it the sum extends while
// |term| >= term_tol. |term(a)| must be decreasing in |a| outside the window.
template <typename TermFn>
double sum_images(double head, double w, double R, const SeriesControl& ctl,
                  std::int64_t& budget, TermFn term) {
    const auto k_hi = static_cast<std::int64_t>(std::floor((R - head) / (2.0 * w)));
    const auto k_lo = static_cast<std::int64_t>(std::ceil((-R - head) / (2.0 * w)));

    double sum = 0.0;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        if (--budget < 0) throw convergence_error("image series: max_terms exceeded");
        sum += term(head + 2.0 * static_cast<double>(k) * w);
    }
    for (std::int64_t k = k_hi + 1;; ++k) {
        if (--budget < 0) throw convergence_error("image series: max_terms exceeded");
        const double x = term(head + 2.0 * static_cast<double>(k) * w);
        if (std::abs(x) < ctl.term_tol) break;
        sum += x;
    }
    for (std::int64_t k = k_lo - 1;; --k) {
        if (--budget < 0) throw convergence_error("image series: max_terms exceeded");
        const double x = term(head + 2.0 * static_cast<double>(k) * w);
        if (std::abs(x) < ctl.term_tol) break;
        sum += x;
    }
    return sum;
}

double ss_density_unchecked(double t, double v, double w, const SeriesControl& ctl,
                            std::int64_t& budget) {
    const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * t * std::sqrt(t));
    const double R = window_z * std::sqrt(t) + w;
    return sum_images(w - v, w, R, ctl, budget,
                      [&](double a) { return norm * a * std::exp(-a * a / (2.0 * t)); });
}

// Time integral of one signed Levy kernel: 2 sign(a) Phi(-|a|/sqrt(t)),
// computed as sign(a) erfc(|a| / sqrt(2t)).
double cdf_family(double head, double w, double t, const SeriesControl& ctl,
                  std::int64_t& budget) {
    const double inv = 1.0 / std::sqrt(2.0 * t);
    const double R = window_z * std::sqrt(t) + w;
    return sum_images(head, w, R, ctl, budget, [&](double a) {
        const double e = specfun::erfc(std::abs(a) * inv);
        return a < 0.0 ? -e : e;
    });
}

void check_series_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw domain_error("two-sided: time must be finite and nonnegative");
}

void check_probability(double p) {
    if (!(p >= 0.0) || p >= 1.0)
        throw domain_error("two-sided quantile: probability must lie in [0, 1)");
    if (p > 1.0 - 1e-14)
        throw saturation_error("two-sided quantile: probability within 1e-14 of 1");
}

} // namespace

TwoSidedBoundary::TwoSidedBoundary(double upper, double lower) : g(upper), h(lower) {
    if (!(h < 0.0 && 0.0 < g) || !std::isfinite(g) || !std::isfinite(h))
        throw validation_error("TwoSidedBoundary: levels must be finite with h < 0 < g");
}

double ss_density(double t, double v, double w, const SeriesControl& ctl) {
    if (!(0.0 < v && v < w)) throw domain_error("ss_density: requires 0 < v < w");
    if (!(t > 0.0) || !std::isfinite(t)) throw domain_error("ss_density: requires t > 0");
    auto budget = static_cast<std::int64_t>(ctl.max_terms);
    return ss_density_unchecked(t, v, w, ctl, budget);
}

double two_sided_pdf(const TwoSidedBoundary& b, double t, const SeriesControl& ctl) {
    check_series_time(t);
    if (t == 0.0) return 0.0;
    const double w = b.g - b.h;
    auto budget = static_cast<std::int64_t>(ctl.max_terms);
    return ss_density_unchecked(t, b.g, w, ctl, budget) +
           ss_density_unchecked(t, -b.h, w, ctl, budget);
}

double two_sided_cdf(const TwoSidedBoundary& b, double t, const SeriesControl& ctl) {
    check_series_time(t);
    if (t == 0.0) return 0.0;
    const double w = b.g - b.h;
    auto budget = static_cast<std::int64_t>(ctl.max_terms);
    const double p = cdf_family(-b.h, w, t, ctl, budget) + cdf_family(b.g, w, t, ctl, budget);
    return std::clamp(p, 0.0, 1.0);
}

double two_sided_cdf_inverse(const TwoSidedBoundary& b, double p, const SeriesControl& ctl) {
    check_probability(p);
    if (p == 0.0) return 0.0;

    const OneSidedBoundary nearest(std::min(b.g, -b.h));
    double hi = levy_cdf_inverse(nearest, p);         // P_{g,h} >= P_min
    double lo = levy_cdf_inverse(nearest, 0.5 * p);   // P_{g,h} <= 2 P_min

    const auto f = [&](double t) { return two_sided_cdf(b, t, ctl); };
    for (int i = 0; i < 8 && f(hi) < p; ++i) hi *= 2.0;
    for (int i = 0; i < 8 && f(lo) > p; ++i) lo *= 0.5;
    return find_root_increasing(f, p, lo, hi);
}

} // namespace fptqv
