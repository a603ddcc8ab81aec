#include "fptqv/wiener_one_sided.hpp"

#include "fptqv/errors.hpp"
#include "fptqv/specfun.hpp"

#include <cmath>
#include <numbers>

namespace fptqv {

namespace {
constexpr double saturation_threshold = 1e-14;

void check_time(double t) {
    if (!(t >= 0.0)) throw domain_error("levy: time must be nonnegative");
}

void check_probability(double p) {
    if (!(p >= 0.0) || p >= 1.0)
        throw domain_error("levy quantile: probability must lie in [0, 1)");
    if (p > 1.0 - saturation_threshold)
        throw saturation_error("levy quantile: probability within 1e-14 of 1");
}
} // namespace

OneSidedBoundary::OneSidedBoundary(double level) : g(level) {
    if (!(g > 0.0) || !std::isfinite(g))
        throw validation_error("OneSidedBoundary: level must be finite and > 0");
}

double levy_cdf(const OneSidedBoundary& b, double t) {
    check_time(t);
    if (t == 0.0) return 0.0;
    return specfun::erfc(b.g / std::sqrt(2.0 * t));
}

double levy_pdf(const OneSidedBoundary& b, double t) {
    check_time(t);
    if (t == 0.0) return 0.0;
    return b.g / std::sqrt(2.0 * std::numbers::pi * t * t * t) * std::exp(-b.g * b.g / (2.0 * t));
}

double levy_cdf_inverse(const OneSidedBoundary& b, double p) {
    check_probability(p);
    if (p == 0.0) return 0.0;
    const double u = specfun::erfcinv(p); // = erfinv(1 - p), tail-exact
    return b.g * b.g / (2.0 * u * u);
}

double levy_pdf_at_inverse(const OneSidedBoundary& b, double p) {
    check_probability(p);
    if (p == 0.0) return 0.0;
    const double u = specfun::erfcinv(p);
    return 2.0 * std::numbers::inv_sqrtpi / (b.g * b.g) * u * u * u * std::exp(-u * u);
}

} // namespace fptqv
