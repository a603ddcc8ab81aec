#pragma once

#include "fptqv/time_change.hpp"

#include <cstdint>
#include <functional>
#include <vector>

// Monte Carlo estimator of first-passage distributions for time-changed
// Brownian motion, used as the independent oracle for every closed form in
// the library. Paths are simulated directly on the variation clock (equal
// steps in v), which makes increments exactly Gaussian and makes the
// time-change identity Z_t = B_{<Z>_t} the literal simulation scheme;
// crossing levels are mapped back to times through the clock's generalized
// inverse. Optional Brownian-bridge correction removes the discretization
// bias of between-step crossings.

namespace fptqv {

struct SimConfig {
    std::int64_t n_paths = 100'000;
    std::int64_t clock_steps = 256; // steps per unit of variation
    std::uint64_t seed = 1;
    bool bridge_correction = true;
    double horizon = 1.0;
};

/// Sorted crossing times censored at the horizon. censored_count paths never
/// crossed; times.size() + censored_count == n_paths.
struct EmpiricalCdf {
    std::vector<double> times;
    std::int64_t n_paths = 0;
    std::int64_t censored_count = 0;
    std::int64_t upper_crossings = 0; // two-sided runs: crossings through g

    double horizon = 0.0;

    /// Fraction of paths with crossing time <= t.
    double value(double t) const;
};

// Deterministic given cfg.seed: per-path generator streams are derived from
// (seed, path index), so results are bit-identical for any thread count.
// n_threads = 0 picks the hardware concurrency.
EmpiricalCdf simulate_one_sided(const QuadraticVariationPath& path, const OneSidedBoundary& b,
                                const SimConfig& cfg, int n_threads = 0);

/// Bridge correction is applied per barrier with the union combination
/// p_g + p_h - p_g p_h; the residual two-barrier bias is covered by the
/// clock-refinement convergence tests.
EmpiricalCdf simulate_two_sided(const QuadraticVariationPath& path, const TwoSidedBoundary& b,
                                const SimConfig& cfg, int n_threads = 0);

/// Draws a scenario per path by weight, then simulates under it. With a
/// single scenario no draw is consumed, so the result is bit-identical to
/// simulating under that scenario directly.
EmpiricalCdf simulate_mixture(const ScenarioSet& set, const SimConfig& cfg, int n_threads = 0);

/// Kolmogorov-Smirnov distance sup_{t in [0, horizon]} |F_hat(t) - F(t)|
/// against a continuous cdf, evaluated at the sample points and the horizon
/// (censored mass counts as not-yet-crossed).
double ks_distance(const EmpiricalCdf& emp, const std::function<double(double)>& analytic_cdf);

} // namespace fptqv
