#include "fptqv/roots.hpp"

#include "fptqv/errors.hpp"

#include <cmath>

namespace fptqv {

double find_root_increasing(const std::function<double(double)>& f, double target,
                            double lo, double hi, const RootOptions& opt) {
    if (!(lo <= hi)) throw convergence_error("find_root_increasing: empty bracket");

    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo > 0.0 || fhi < 0.0)
        throw convergence_error("find_root_increasing: bracket does not straddle the target");

    for (int it = 0; it < opt.max_iter; ++it) {
        const double width = hi - lo;
        if (width <= opt.rel_tol * std::min(std::abs(lo), std::abs(hi)) + opt.abs_tol)
            return 0.5 * (lo + hi);

        // Secant proposal on even iterations, forced bisection on odd ones;
        // the alternation guarantees geometric bracket shrinkage even when
        // secant steps crawl along one edge (steep quantile shapes).
        double x = lo + 0.5 * width;
        if (it % 2 == 0) {
            const double proposal = lo - flo * width / (fhi - flo);
            const double margin = 0.01 * width;
            if (proposal > lo + margin && proposal < hi - margin) x = proposal;
        }

        const double fx = f(x) - target;
        if (fx == 0.0) return x;
        if (fx < 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    throw convergence_error("find_root_increasing: iteration budget exhausted");
}

} // namespace fptqv
