#pragma once

#include "fptqv/time_change.hpp"
#include "fptqv/wiener_one_sided.hpp"
#include "fptqv/wiener_two_sided.hpp"

#include <cstdint>
#include <vector>

// The inverse first-passage problem: from a target survival cdf F (or pdf f),
// construct the quadratic-variation clock v_F (or the spot-variance function
// sigma^2) whose crossing probability reproduces the target,
//   v_F(t) = P^{-1}(F(t)) 1{0 < F(t) < 1},
//   sigma^2(t) = f(t) / f^W(P^{-1}(F(t))) 1{0 < F(t) < 1},
// in the one-sided, two-sided, and per-scenario random cases, with the
// solvability assumptions checked up front.

namespace fptqv {

/// Target distribution on a time grid under monotone piecewise-linear
/// interpolation. Knots start at (0, 0); values in [0, 1], nondecreasing.
/// Monotonicity violations up to 1e-12 are repaired by clamping.
class SurvivalCdf {
public:
    static SurvivalCdf from_knots(std::vector<double> times, std::vector<double> values);

    double operator()(double t) const;
    const std::vector<double>& times() const { return t_; }
    const std::vector<double>& values() const { return F_; }

private:
    SurvivalCdf() = default;
    std::vector<double> t_, F_;
};

/// Target density samples (t_i, f_i), f >= 0, t strictly increasing. The
/// induced cdf comes from cumulative trapezoidal quadrature, with zero mass
/// below the first knot.
class SurvivalPdf {
public:
    static SurvivalPdf from_knots(std::vector<double> times, std::vector<double> values);

    SurvivalCdf induced_cdf() const;
    double operator()(double t) const; // piecewise-linear, 0 outside the grid
    const std::vector<double>& times() const { return t_; }
    const std::vector<double>& values() const { return f_; }

private:
    SurvivalPdf() = default;
    std::vector<double> t_, f_;
};

/// K0 = inf{t > 0 : F(t) > 0} and K1 = inf{t > 0 : F(t) = 1}, computed
/// exactly on the piecewise-linear representation; +inf when never attained.
struct SupportThresholds {
    double k0;
    double k1;
};

SupportThresholds support_thresholds(const SurvivalCdf& F);

struct InverseReport {
    SupportThresholds thresholds{0.0, 0.0};
    bool assumption_k1_infinite = false;
    bool local_integrability_ok = true; // meaningful for pdf-driven runs only
    std::int64_t clamped_knots = 0;     // knots with F >= 1 - 1e-14
};

/// Thresholds and assumption flags for a cdf target; never throws.
/// local_integrability_ok is left true (it needs a pdf to be checked).
InverseReport analyze_target(const SurvivalCdf& F);

/// Numerical proxy for local integrability of the explicit variance solution
/// at the support onset: the trapezoidal integral over [K0, K0 + eta] (eta =
/// one knot spacing) must be finite and stable under refinement by 2x.
bool check_local_integrability(const SurvivalPdf& f, const Boundary& b,
                               const SeriesControl& ctl = {});

/// Spot-variance solution on the pdf grid; integrates to the clock by
/// cumulative trapezoids.
struct VarianceFunction {
    std::vector<double> times;
    std::vector<double> values;

    QuadraticVariationPath to_clock() const;
};

struct ClockSolution {
    QuadraticVariationPath clock;
    InverseReport report;
};

struct VarianceSolution {
    VarianceFunction variance;
    InverseReport report;
};

// Deterministic solvers. Throw assumption_error when K1 is finite (or, for
// the variance forms, when the local-integrability proxy fails) and
// saturation_error when a knot has F >= 1 - 1e-14.
ClockSolution qv_solution_one_sided(const SurvivalCdf& F, const OneSidedBoundary& b);
ClockSolution qv_solution_two_sided(const SurvivalCdf& F, const TwoSidedBoundary& b,
                                    const SeriesControl& ctl = {});
VarianceSolution variance_solution_one_sided(const SurvivalPdf& f, const OneSidedBoundary& b);
VarianceSolution variance_solution_two_sided(const SurvivalPdf& f, const TwoSidedBoundary& b,
                                             const SeriesControl& ctl = {});

/// One scenario of the random case. One-sided entries must be normalized to
/// boundary 1 (the caller supplies the target of T_1^{Z/g}).
struct RandomScenarioTarget {
    double weight;
    SurvivalCdf target;
    Boundary boundary;
};

struct RandomScenarioPdfTarget {
    double weight;
    SurvivalPdf target;
    Boundary boundary;
};

struct RandomClockSolution {
    ScenarioSet scenarios;
    std::vector<InverseReport> reports;
};

struct RandomVarianceSolution {
    std::vector<VarianceFunction> variances;
    std::vector<InverseReport> reports;
};

// Apply the deterministic solver scenario by scenario; failures are reported
// with the offending scenario index in the message.
RandomClockSolution qv_solution_random(const std::vector<RandomScenarioTarget>& targets,
                                       const SeriesControl& ctl = {});
RandomVarianceSolution variance_solution_random(
    const std::vector<RandomScenarioPdfTarget>& targets, const SeriesControl& ctl = {});

} // namespace fptqv
