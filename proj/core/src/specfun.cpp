#include "fptqv/specfun.hpp"

#include "fptqv/errors.hpp"

#include <cmath>
#include <numbers>

namespace fptqv::specfun {

namespace {

constexpr double two_over_sqrt_pi = 2.0 * std::numbers::inv_sqrtpi;

// Normal quantile of Wichura's algorithm AS241 (PPND16), accurate to about
// 1 part in 1e16. `r` is sqrt(-log(min(p, 1-p))) for the tail branches.
double as241_central(double q) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
}

double as241_tail(double r) {
    if (r <= 5.0) {
        const double s = r - 1.6;
        return (((((((7.74545014278341407640e-4 * s + 2.27238449892691845833e-2) * s +
                     2.41780725177450611770e-1) * s + 1.27045825245236838258e0) * s +
                   3.64784832476320460504e0) * s + 5.76949722146069140550e0) * s +
                 4.63033784615654529590e0) * s + 1.42343711074968357734e0) /
               (((((((1.05075007164441684324e-9 * s + 5.47593808499534494600e-4) * s +
                     1.51986665636164571966e-2) * s + 1.48103976427480074590e-1) * s +
                   6.89767334985100004550e-1) * s + 1.67638483018380384940e0) * s +
                 2.05319162663775882187e0) * s + 1.0);
    }
    const double s = r - 5.0;
    return (((((((2.01033439929228813265e-7 * s + 2.71155556874348757815e-5) * s +
                 1.24266094738807843860e-3) * s + 2.65321895265761230930e-2) * s +
               2.96560571828504891230e-1) * s + 1.78482653991729133580e0) * s +
             5.46378491116411436990e0) * s + 6.65790464350110377720e0) /
           (((((((2.04426310338993978564e-15 * s + 1.42151175831644588870e-7) * s +
                 1.84631831751005468180e-5) * s + 7.86869131145613259100e-4) * s +
               1.48753612908506148525e-2) * s + 1.36929880922735805310e-1) * s +
             5.99832206555887937690e-1) * s + 1.0);
}

// One Newton step on erfc(x) - q = 0. erfc is monotone decreasing, so the
// correction is (erfc(x) - q) / (2/sqrt(pi) exp(-x^2)). Skipped where
// exp(-x^2) underflows; there the AS241 far-tail rational is already at
// full double precision.
double polish_against_erfc(double x, double q) {
    if (x > 26.0) return x;
    const double density = two_over_sqrt_pi * std::exp(-x * x);
    if (density == 0.0) return x;
    return x + (std::erfc(x) - q) / density;
}

// erfcinv on (0, 1]; assumes the argument is already validated.
double erfcinv_right(double q) {
    if (q == 1.0) return 0.0;
    if (q >= 0.5) {
        // Near the center: central rational in p = 1 - q (exact by Sterbenz).
        const double p = 1.0 - q;
        double x = as241_central(p / 2.0) / std::numbers::sqrt2;
        x = x - (std::erf(x) - p) / (two_over_sqrt_pi * std::exp(-x * x));
        x = x - (std::erf(x) - p) / (two_over_sqrt_pi * std::exp(-x * x));
        return x;
    }
    // Tail: rational in sqrt(-log(q/2)), i.e. on the log of the tail mass.
    // Written as log2 - log(q) so the smallest subnormals do not underflow.
    const double r = std::sqrt(std::numbers::ln2 - std::log(q));
    double x = as241_tail(r) / std::numbers::sqrt2;
    x = polish_against_erfc(x, q);
    x = polish_against_erfc(x, q);
    return x;
}

} // namespace

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double erf(double x) { return std::erf(x); }

double erfc(double x) { return std::erfc(x); }

double erfcinv(double q) {
    if (!(q > 0.0 && q < 2.0))
        throw domain_error("erfcinv: argument must lie in (0, 2)");
    if (q > 1.0) return -erfcinv_right(2.0 - q);
    return erfcinv_right(q);
}

double erfinv(double p) {
    if (!(p > -1.0 && p < 1.0))
        throw domain_error("erfinv: argument must lie in (-1, 1)");
    if (p == 0.0) return 0.0;
    const double a = std::abs(p);
    if (a > 0.9) {
        // Complementary channel; 1 - a is exact for a >= 0.5.
        const double x = erfcinv_right(1.0 - a);
        return p < 0.0 ? -x : x;
    }
    double x = as241_central(p / 2.0) / std::numbers::sqrt2;
    x = x - (std::erf(x) - p) / (two_over_sqrt_pi * std::exp(-x * x));
    x = x - (std::erf(x) - p) / (two_over_sqrt_pi * std::exp(-x * x));
    return x;
}

} // namespace fptqv::specfun
