#pragma once

#include <functional>

namespace fptqv {

struct RootOptions {
    double rel_tol = 1e-12;   // relative tolerance on the abscissa
    double abs_tol = 1e-300;  // absolute floor for brackets touching zero
    int max_iter = 200;
};

/// Solves f(x) = target for a nondecreasing f on the bracket [lo, hi].
///
/// Bisection refined by secant steps: each iteration proposes a secant point
/// and falls back to the midpoint whenever the proposal leaves the bracket or
/// fails to shrink it adequately. Guaranteed to converge for monotone f.
/// Requires f(lo) <= target <= f(hi); throws convergence_error otherwise or
/// when the iteration budget is exhausted before the bracket collapses.
double find_root_increasing(const std::function<double(double)>& f, double target,
                            double lo, double hi, const RootOptions& opt = {});

} // namespace fptqv
