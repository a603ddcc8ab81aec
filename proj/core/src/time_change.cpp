#include "fptqv/time_change.hpp"

#include "fptqv/errors.hpp"
#include "fptqv/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fptqv {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
} // namespace

QuadraticVariationPath QuadraticVariationPath::identity() { return linear(1.0); }

QuadraticVariationPath QuadraticVariationPath::linear(double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate))
        throw validation_error("clock: linear rate must be finite and >= 0");
    return QuadraticVariationPath(Affine{rate}, inf);
}

QuadraticVariationPath QuadraticVariationPath::from_grid(std::vector<double> times,
                                                         std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2)
        throw validation_error("clock grid: need at least two knots with matching sizes");
    if (times.front() != 0.0 || values.front() != 0.0)
        throw validation_error("clock grid: first knot must be (0, 0)");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1]) || !std::isfinite(times[i]))
            throw validation_error("clock grid: times must be finite and strictly increasing");
        if (!(values[i] >= values[i - 1]) || !std::isfinite(values[i]))
            throw validation_error("clock grid: values must be finite and nondecreasing");
    }
    const double end = times.back();
    return QuadraticVariationPath(Grid{std::move(times), std::move(values)}, end);
}

QuadraticVariationPath QuadraticVariationPath::closed_form(
    std::function<double(double)> value, std::function<double(double)> derivative,
    double domain_end) {
    if (!value) throw validation_error("clock: closed form requires a value function");
    if (!(domain_end > 0.0)) throw validation_error("clock: domain_end must be positive");
    if (!(std::abs(value(0.0)) <= 1e-12))
        throw validation_error("clock: v(0) must be 0");
    return QuadraticVariationPath(Closed{std::move(value), std::move(derivative)}, domain_end);
}

bool QuadraticVariationPath::has_derivative() const {
    if (std::holds_alternative<Closed>(rep_)) return static_cast<bool>(std::get<Closed>(rep_).dv);
    return true;
}

bool QuadraticVariationPath::is_grid() const { return std::holds_alternative<Grid>(rep_); }

const std::vector<double>& QuadraticVariationPath::grid_times() const {
    if (!is_grid()) throw domain_error("clock: not a grid representation");
    return std::get<Grid>(rep_).t;
}

const std::vector<double>& QuadraticVariationPath::grid_values() const {
    if (!is_grid()) throw domain_error("clock: not a grid representation");
    return std::get<Grid>(rep_).v;
}

double QuadraticVariationPath::value(double t) const {
    if (!(t >= 0.0) || t > domain_end_)
        throw domain_error("clock: time outside [0, domain_end]");
    if (const auto* a = std::get_if<Affine>(&rep_)) return a->rate * t;
    if (const auto* c = std::get_if<Closed>(&rep_)) return c->v(t);
    const auto& g = std::get<Grid>(rep_);
    const auto it = std::lower_bound(g.t.begin(), g.t.end(), t);
    const auto i = static_cast<std::size_t>(it - g.t.begin());
    if (i < g.t.size() && g.t[i] == t) return g.v[i]; // exact at knots
    const double t0 = g.t[i - 1], t1 = g.t[i];
    return g.v[i - 1] + (g.v[i] - g.v[i - 1]) * (t - t0) / (t1 - t0);
}

double QuadraticVariationPath::derivative(double t) const {
    if (!(t >= 0.0) || t > domain_end_)
        throw domain_error("clock: time outside [0, domain_end]");
    if (const auto* a = std::get_if<Affine>(&rep_)) return a->rate;
    if (const auto* c = std::get_if<Closed>(&rep_)) {
        if (!c->dv)
            throw domain_error("clock: derivative unavailable (not absolutely continuous)");
        return c->dv(t);
    }
    const auto& g = std::get<Grid>(rep_);
    // Right-hand slope at knots; the last knot keeps its left segment's slope.
    auto it = std::upper_bound(g.t.begin(), g.t.end(), t);
    auto i = static_cast<std::size_t>(it - g.t.begin());
    if (i == g.t.size()) i = g.t.size() - 1;
    return (g.v[i] - g.v[i - 1]) / (g.t[i] - g.t[i - 1]);
}

double QuadraticVariationPath::generalized_inverse(double s) const {
    if (!(s >= 0.0)) throw domain_error("clock inverse: level must be nonnegative");
    if (const auto* a = std::get_if<Affine>(&rep_)) {
        if (a->rate == 0.0) {
            if (s == 0.0)
                throw domain_error("clock inverse: flat clock never exceeds 0");
            throw domain_error("clock inverse: level beyond reachable variation");
        }
        return s / a->rate;
    }
    if (const auto* c = std::get_if<Closed>(&rep_)) {
        if (s >= c->v(domain_end_))
            throw domain_error("clock inverse: level beyond reachable variation");
        if (c->v(0.0) > s) return 0.0;
        return find_root_increasing(c->v, s, 0.0, domain_end_);
    }
    const auto& g = std::get<Grid>(rep_);
    // First knot strictly above s; the crossing inside the preceding segment
    // is the right endpoint of the level set, matching inf{u : v(u) > s}.
    const auto it = std::upper_bound(g.v.begin(), g.v.end(), s);
    if (it == g.v.end())
        throw domain_error("clock inverse: level beyond reachable variation");
    const auto j = static_cast<std::size_t>(it - g.v.begin());
    const double v0 = g.v[j - 1], v1 = g.v[j];
    const double t0 = g.t[j - 1], t1 = g.t[j];
    return t0 + (s - v0) * (t1 - t0) / (v1 - v0);
}

ScenarioSet::ScenarioSet(std::vector<Scenario> scenarios) : scenarios_(std::move(scenarios)) {
    if (scenarios_.empty()) throw validation_error("scenario set: must not be empty");
    double total = 0.0;
    for (const auto& s : scenarios_) {
        if (!(s.weight >= 0.0) || !std::isfinite(s.weight))
            throw validation_error("scenario set: weights must be finite and >= 0");
        total += s.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw validation_error("scenario set: weights must sum to 1 within 1e-12");
}

double crossing_cdf_one_sided(const QuadraticVariationPath& path, const OneSidedBoundary& b,
                              double t) {
    return levy_cdf(b, path.value(t));
}

double crossing_pdf_one_sided(const QuadraticVariationPath& path, const OneSidedBoundary& b,
                              double t) {
    return path.derivative(t) * levy_pdf(b, path.value(t));
}

double crossing_cdf_two_sided(const QuadraticVariationPath& path, const TwoSidedBoundary& b,
                              double t, const SeriesControl& ctl) {
    return two_sided_cdf(b, path.value(t), ctl);
}

double crossing_pdf_two_sided(const QuadraticVariationPath& path, const TwoSidedBoundary& b,
                              double t, const SeriesControl& ctl) {
    return path.derivative(t) * two_sided_pdf(b, path.value(t), ctl);
}

namespace {

const OneSidedBoundary& unit_boundary(const Scenario& s, std::size_t index) {
    const auto* b = std::get_if<OneSidedBoundary>(&s.boundary);
    if (b == nullptr)
        throw validation_error("mixture: scenario " + std::to_string(index) +
                               " is not one-sided");
    if (b->g != 1.0)
        throw validation_error("mixture: one-sided scenario " + std::to_string(index) +
                               " must be normalized to boundary 1 (Y = Z/g)");
    return *b;
}

const TwoSidedBoundary& two_sided_boundary(const Scenario& s, std::size_t index) {
    const auto* b = std::get_if<TwoSidedBoundary>(&s.boundary);
    if (b == nullptr)
        throw validation_error("mixture: scenario " + std::to_string(index) +
                               " is not two-sided");
    return *b;
}

} // namespace

double mixture_cdf_one_sided(const ScenarioSet& set, double t) {
    double sum = 0.0;
    for (std::size_t i = 0; i < set.scenarios().size(); ++i) {
        const auto& s = set.scenarios()[i];
        sum += s.weight * levy_cdf(unit_boundary(s, i), s.clock.value(t));
    }
    return sum;
}

double mixture_pdf_one_sided(const ScenarioSet& set, double t) {
    double sum = 0.0;
    for (std::size_t i = 0; i < set.scenarios().size(); ++i) {
        const auto& s = set.scenarios()[i];
        sum += s.weight * s.clock.derivative(t) * levy_pdf(unit_boundary(s, i), s.clock.value(t));
    }
    return sum;
}

double mixture_cdf_two_sided(const ScenarioSet& set, double t, const SeriesControl& ctl) {
    double sum = 0.0;
    for (std::size_t i = 0; i < set.scenarios().size(); ++i) {
        const auto& s = set.scenarios()[i];
        sum += s.weight * two_sided_cdf(two_sided_boundary(s, i), s.clock.value(t), ctl);
    }
    return sum;
}

double mixture_pdf_two_sided(const ScenarioSet& set, double t, const SeriesControl& ctl) {
    double sum = 0.0;
    for (std::size_t i = 0; i < set.scenarios().size(); ++i) {
        const auto& s = set.scenarios()[i];
        sum += s.weight * s.clock.derivative(t) *
               two_sided_pdf(two_sided_boundary(s, i), s.clock.value(t), ctl);
    }
    return sum;
}

} // namespace fptqv
