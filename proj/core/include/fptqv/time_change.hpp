#pragma once

#include "fptqv/wiener_one_sided.hpp"
#include "fptqv/wiener_two_sided.hpp"

#include <functional>
#include <variant>
#include <vector>

// Quadratic-variation clocks and the time-change reduction: the boundary
// crossing probability of a continuous local martingale to a constant
// boundary equals the Wiener crossing probability evaluated at the clock,
// P^Z(t) = P^W(<Z>_t). Finite weighted scenario sets model the random case.

namespace fptqv {

/// A nondecreasing clock t -> v(t) with v(0) = 0, represented either in
/// closed form (optionally with a derivative) or as a strictly ordered knot
/// grid under monotone linear interpolation. Immutable after construction.
class QuadraticVariationPath {
public:
    /// The identity clock v(t) = t (a standard Wiener process).
    static QuadraticVariationPath identity();

    /// v(t) = rate * t, rate >= 0.
    static QuadraticVariationPath linear(double rate);

    /// Piecewise-linear clock through knots (t_i, v_i); t strictly increasing
    /// starting at 0, v nondecreasing starting at 0.
    static QuadraticVariationPath from_grid(std::vector<double> times,
                                            std::vector<double> values);

    /// Closed-form clock; pass a null derivative if v is not absolutely
    /// continuous (density formulas will then be unavailable).
    static QuadraticVariationPath closed_form(std::function<double(double)> value,
                                              std::function<double(double)> derivative,
                                              double domain_end);

    /// v(t); exact at grid knots. Throws domain_error outside [0, domain_end].
    double value(double t) const;

    /// v'(t); right-hand slope at grid knots. Throws domain_error if the
    /// representation carries no derivative.
    double derivative(double t) const;

    /// Right-continuous generalized inverse inf{ u >= 0 : v(u) > s }; on a
    /// flat segment of v this is the right endpoint of the level set.
    /// Throws domain_error when s is beyond the reachable variation.
    double generalized_inverse(double s) const;

    double domain_end() const { return domain_end_; }
    bool has_derivative() const;
    bool is_grid() const;

    /// Knot views, valid only for grid clocks.
    const std::vector<double>& grid_times() const;
    const std::vector<double>& grid_values() const;

private:
    struct Affine {
        double rate;
    };
    struct Grid {
        std::vector<double> t, v;
    };
    struct Closed {
        std::function<double(double)> v, dv;
    };

    QuadraticVariationPath(std::variant<Affine, Grid, Closed> rep, double domain_end)
        : rep_(std::move(rep)), domain_end_(domain_end) {}

    std::variant<Affine, Grid, Closed> rep_;
    double domain_end_;
};

using Boundary = std::variant<OneSidedBoundary, TwoSidedBoundary>;

/// One branch of the random case: a clock and its boundary, carrying the
/// probability weight of the branch.
struct Scenario {
    double weight;
    QuadraticVariationPath clock;
    Boundary boundary;
};

/// Finite weighted scenario model of a random (boundary, clock) pair.
/// Weights must be nonnegative and sum to 1 within 1e-12. Continuous mixing
/// distributions must be pre-sampled by the caller.
class ScenarioSet {
public:
    explicit ScenarioSet(std::vector<Scenario> scenarios);
    const std::vector<Scenario>& scenarios() const { return scenarios_; }

private:
    std::vector<Scenario> scenarios_;
};

// Deterministic clock, deterministic boundary.
double crossing_cdf_one_sided(const QuadraticVariationPath& path, const OneSidedBoundary& b,
                              double t);
double crossing_pdf_one_sided(const QuadraticVariationPath& path, const OneSidedBoundary& b,
                              double t);
double crossing_cdf_two_sided(const QuadraticVariationPath& path, const TwoSidedBoundary& b,
                              double t, const SeriesControl& ctl = {});
double crossing_pdf_two_sided(const QuadraticVariationPath& path, const TwoSidedBoundary& b,
                              double t, const SeriesControl& ctl = {});

// Random case as finite mixtures over scenarios. One-sided scenarios must be
// normalized to boundary 1 (the reduction Y = Z/g maps T_g^Z to T_1^Y and
// scales the clock by 1/g^2); a one-sided scenario with g != 1 is rejected.
// In the two-sided case the caller is responsible for the independence of
// the process from the boundary pair, which the mixture formula assumes.
double mixture_cdf_one_sided(const ScenarioSet& set, double t);
double mixture_pdf_one_sided(const ScenarioSet& set, double t);
double mixture_cdf_two_sided(const ScenarioSet& set, double t, const SeriesControl& ctl = {});
double mixture_pdf_two_sided(const ScenarioSet& set, double t, const SeriesControl& ctl = {});

} // namespace fptqv
