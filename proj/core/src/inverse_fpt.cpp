#include "fptqv/inverse_fpt.hpp"

#include "fptqv/errors.hpp"
#include "fptqv/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace fptqv {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double saturation_threshold = 1e-14;
constexpr double monotone_repair_tol = 1e-12;

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    const auto it = std::lower_bound(xs.begin(), xs.end(), x);
    const auto i = static_cast<std::size_t>(it - xs.begin());
    if (i < xs.size() && xs[i] == x) return ys[i];
    const double x0 = xs[i - 1], x1 = xs[i];
    return ys[i - 1] + (ys[i] - ys[i - 1]) * (x - x0) / (x1 - x0);
}
} // namespace

SurvivalCdf SurvivalCdf::from_knots(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2)
        throw validation_error("survival cdf: need at least two knots with matching sizes");
    if (times.front() != 0.0 || values.front() != 0.0)
        throw validation_error("survival cdf: first knot must be (0, 0)");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
            throw validation_error("survival cdf: knot " + std::to_string(i) + " not finite");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw validation_error("survival cdf: times not strictly increasing at knot " +
                                   std::to_string(i));
        if (values[i] < 0.0 || values[i] > 1.0) {
            if (values[i] >= -monotone_repair_tol && values[i] <= 1.0 + monotone_repair_tol)
                values[i] = std::clamp(values[i], 0.0, 1.0);
            else
                throw validation_error("survival cdf: value outside [0, 1] at knot " +
                                       std::to_string(i));
        }
        if (i > 0 && values[i] < values[i - 1]) {
            if (values[i - 1] - values[i] <= monotone_repair_tol)
                values[i] = values[i - 1];
            else
                throw validation_error("survival cdf: decreasing by more than 1e-12 at knot " +
                                       std::to_string(i));
        }
    }
    SurvivalCdf out;
    out.t_ = std::move(times);
    out.F_ = std::move(values);
    return out;
}

double SurvivalCdf::operator()(double t) const {
    if (!(t >= t_.front()) || t > t_.back())
        throw domain_error("survival cdf: evaluation outside the knot range");
    return interp(t_, F_, t);
}

SurvivalPdf SurvivalPdf::from_knots(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2)
        throw validation_error("survival pdf: need at least two knots with matching sizes");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
            throw validation_error("survival pdf: knot " + std::to_string(i) + " not finite");
        if (!(times[i] >= 0.0))
            throw validation_error("survival pdf: negative time at knot " + std::to_string(i));
        if (i > 0 && !(times[i] > times[i - 1]))
            throw validation_error("survival pdf: times not strictly increasing at knot " +
                                   std::to_string(i));
        if (values[i] < 0.0)
            throw validation_error("survival pdf: negative density at knot " +
                                   std::to_string(i));
    }
    SurvivalPdf out;
    out.t_ = std::move(times);
    out.f_ = std::move(values);
    return out;
}

double SurvivalPdf::operator()(double t) const {
    if (t < t_.front() || t > t_.back()) return 0.0;
    return interp(t_, f_, t);
}

SurvivalCdf SurvivalPdf::induced_cdf() const {
    std::vector<double> ct, cF;
    ct.reserve(t_.size() + 2);
    cF.reserve(t_.size() + 2);
    if (t_.front() > 0.0) { // no mass below the first sample
        ct.push_back(0.0);
        cF.push_back(0.0);
    }
    ct.push_back(t_.front());
    cF.push_back(0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < t_.size(); ++i) {
        acc += 0.5 * (f_[i] + f_[i - 1]) * (t_[i] - t_[i - 1]);
        ct.push_back(t_[i]);
        cF.push_back(acc);
    }
    if (acc > 1.0 + monotone_repair_tol)
        throw validation_error("survival pdf: integrates to " + std::to_string(acc) +
                               " > 1; not a density");
    return SurvivalCdf::from_knots(std::move(ct), std::move(cF));
}

SupportThresholds support_thresholds(const SurvivalCdf& F) {
    const auto& t = F.times();
    const auto& v = F.values();
    SupportThresholds out{inf, inf};
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > 0.0) {
            out.k0 = t[i - 1]; // F is 0 at the previous knot, positive just after it
            break;
        }
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] >= 1.0) {
            out.k1 = t[i];
            break;
        }
    }
    return out;
}

InverseReport analyze_target(const SurvivalCdf& F) {
    InverseReport rep;
    rep.thresholds = support_thresholds(F);
    rep.assumption_k1_infinite = !std::isfinite(rep.thresholds.k1);
    for (double v : F.values())
        if (v >= 1.0 - saturation_threshold) ++rep.clamped_knots;
    return rep;
}

namespace {

using QuantileFn = std::function<double(double)>;
using DensityAtQuantileFn = std::function<double(double)>;

void require_k1_infinite(const InverseReport& rep) {
    if (!rep.assumption_k1_infinite)
        throw assumption_error("inverse problem: target cdf reaches 1 at finite time K1 = " +
                               std::to_string(rep.thresholds.k1));
}

void require_unsaturated(double F, std::size_t knot) {
    if (F >= 1.0 - saturation_threshold)
        throw saturation_error("inverse problem: cdf within 1e-14 of 1 at knot " +
                               std::to_string(knot) + "; trim the grid");
}

std::vector<double> solve_clock_values(const SurvivalCdf& F, const QuantileFn& quantile) {
    const auto& vals = F.values();
    std::vector<double> v(vals.size(), 0.0);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] <= 0.0) continue; // indicator zone: v_F = 0 where F = 0
        require_unsaturated(vals[i], i);
        v[i] = quantile(vals[i]);
        if (i > 0 && v[i] < v[i - 1]) v[i] = v[i - 1]; // absorb sub-ulp inversion
    }
    return v;
}

ClockSolution solve_clock(const SurvivalCdf& F, const QuantileFn& quantile) {
    InverseReport rep = analyze_target(F);
    require_k1_infinite(rep);
    auto clock = QuadraticVariationPath::from_grid(F.times(), solve_clock_values(F, quantile));
    return ClockSolution{std::move(clock), rep};
}

// sigma^2 on the pdf grid given the target's quantile and density-at-quantile.
std::vector<double> solve_variance_values(const SurvivalPdf& f, const SurvivalCdf& F,
                                          const DensityAtQuantileFn& density_at_quantile) {
    const auto& t = f.times();
    const auto& fv = f.values();
    std::vector<double> sig(t.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double Fi = F(t[i]);
        if (Fi <= 0.0) continue;
        require_unsaturated(Fi, i);
        sig[i] = fv[i] / density_at_quantile(Fi);
        if (!std::isfinite(sig[i])) sig[i] = 0.0; // f and the kernel both vanish
    }
    return sig;
}

// Trapezoidal probe of sigma^2 over [K0, K0 + eta] (eta = one knot spacing),
// refined dyadically toward the onset: each level halves the innermost
// panel. The refined integral must stay finite and bounded by a fixed
// multiple of the exact onset clock increment P^{-1}(F(K0 + eta)); a
// divergent variance profile makes the refined sums grow past any such
// bound, while every integrable profile approximates the increment itself.
bool integrability_proxy(const SurvivalPdf& f, const SurvivalCdf& F,
                         const QuantileFn& quantile,
                         const DensityAtQuantileFn& density_at_quantile) {
    const auto thr = support_thresholds(F);
    if (!std::isfinite(thr.k0)) return true; // no mass anywhere: nothing to check
    const auto& t = f.times();
    const double end = t.back();
    if (thr.k0 >= end) return true;
    const auto it = std::upper_bound(t.begin(), t.end(), thr.k0);
    const double eta = std::min((it != t.end() ? *it : end), end) - thr.k0;

    const auto sigma2 = [&](double s) -> double {
        const double Fs = F(s);
        if (Fs <= 0.0 || Fs >= 1.0 - saturation_threshold) return 0.0;
        return f(s) / density_at_quantile(Fs);
    };

    const double f_eta = F(thr.k0 + eta);
    if (!(f_eta > 0.0)) return true; // no resolvable mass in the probe window
    const double onset_increment = quantile(std::min(f_eta, 1.0 - 2e-14));
    if (!std::isfinite(onset_increment)) return false;

    double integral = 0.0;
    double outer = eta;
    double sig_outer = sigma2(thr.k0 + eta);
    for (int j = 1; j <= 45; ++j) {
        const double inner = std::ldexp(eta, -j);
        const double sig_inner = sigma2(thr.k0 + inner);
        const double mass = 0.5 * (sig_inner + sig_outer) * (outer - inner);
        if (!std::isfinite(mass)) return false;
        integral += mass;
        outer = inner;
        sig_outer = sig_inner;
    }
    integral += 0.5 * sig_outer * outer; // innermost sliver, sigma^2(K0) = 0
    if (!std::isfinite(integral)) return false;
    return integral <= 10.0 * onset_increment + 1e-12;
}

VarianceSolution solve_variance(const SurvivalPdf& f, const QuantileFn& quantile,
                                const DensityAtQuantileFn& density_at_quantile) {
    const SurvivalCdf F = f.induced_cdf();
    InverseReport rep = analyze_target(F);
    require_k1_infinite(rep);
    rep.local_integrability_ok = integrability_proxy(f, F, quantile, density_at_quantile);
    if (!rep.local_integrability_ok)
        throw assumption_error(
            "inverse problem: variance solution not locally integrable at the support onset");
    VarianceFunction out{f.times(), solve_variance_values(f, F, density_at_quantile)};
    return VarianceSolution{std::move(out), rep};
}

} // namespace

bool check_local_integrability(const SurvivalPdf& f, const Boundary& b,
                               const SeriesControl& ctl) {
    const SurvivalCdf F = f.induced_cdf();
    if (const auto* one = std::get_if<OneSidedBoundary>(&b)) {
        return integrability_proxy(
            f, F, [=](double p) { return levy_cdf_inverse(*one, p); },
            [=](double p) { return levy_pdf_at_inverse(*one, p); });
    }
    const auto two = std::get<TwoSidedBoundary>(b);
    return integrability_proxy(
        f, F, [=, &ctl](double p) { return two_sided_cdf_inverse(two, p, ctl); },
        [=, &ctl](double p) { return two_sided_pdf(two, two_sided_cdf_inverse(two, p, ctl), ctl); });
}

QuadraticVariationPath VarianceFunction::to_clock() const {
    std::vector<double> t, v;
    t.reserve(times.size() + 1);
    v.reserve(times.size() + 1);
    if (times.front() > 0.0) {
        t.push_back(0.0);
        v.push_back(0.0);
    }
    t.push_back(times.front());
    v.push_back(0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        acc += 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
        t.push_back(times[i]);
        v.push_back(acc);
    }
    return QuadraticVariationPath::from_grid(std::move(t), std::move(v));
}

ClockSolution qv_solution_one_sided(const SurvivalCdf& F, const OneSidedBoundary& b) {
    return solve_clock(F, [&](double p) { return levy_cdf_inverse(b, p); });
}

ClockSolution qv_solution_two_sided(const SurvivalCdf& F, const TwoSidedBoundary& b,
                                    const SeriesControl& ctl) {
    return solve_clock(F, [&](double p) { return two_sided_cdf_inverse(b, p, ctl); });
}

VarianceSolution variance_solution_one_sided(const SurvivalPdf& f, const OneSidedBoundary& b) {
    return solve_variance(
        f, [&](double p) { return levy_cdf_inverse(b, p); },
        [&](double p) { return levy_pdf_at_inverse(b, p); });
}

VarianceSolution variance_solution_two_sided(const SurvivalPdf& f, const TwoSidedBoundary& b,
                                             const SeriesControl& ctl) {
    return solve_variance(
        f, [&](double p) { return two_sided_cdf_inverse(b, p, ctl); },
        [&](double p) { return two_sided_pdf(b, two_sided_cdf_inverse(b, p, ctl), ctl); });
}

namespace {

template <typename Fn>
auto with_scenario_context(std::size_t index, Fn fn) {
    const std::string prefix = "scenario " + std::to_string(index) + ": ";
    try {
        return fn();
    } catch (const assumption_error& e) {
        throw assumption_error(prefix + e.what());
    } catch (const saturation_error& e) {
        throw saturation_error(prefix + e.what());
    } catch (const validation_error& e) {
        throw validation_error(prefix + e.what());
    } catch (const domain_error& e) {
        throw domain_error(prefix + e.what());
    } catch (const convergence_error& e) {
        throw convergence_error(prefix + e.what());
    }
}

void require_normalized_one_sided(const OneSidedBoundary& b) {
    if (b.g != 1.0)
        throw validation_error(
            "one-sided random case uses boundary 1 after the Y = Z/g normalization; "
            "supply the normalized target");
}

} // namespace

RandomClockSolution qv_solution_random(const std::vector<RandomScenarioTarget>& targets,
                                       const SeriesControl& ctl) {
    if (targets.empty()) throw validation_error("random inverse: no scenarios");
    std::vector<Scenario> scenarios;
    std::vector<InverseReport> reports;
    scenarios.reserve(targets.size());
    reports.reserve(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto& sc = targets[i];
        ClockSolution sol = with_scenario_context(i, [&] {
            if (const auto* one = std::get_if<OneSidedBoundary>(&sc.boundary)) {
                require_normalized_one_sided(*one);
                return qv_solution_one_sided(sc.target, *one);
            }
            return qv_solution_two_sided(sc.target, std::get<TwoSidedBoundary>(sc.boundary), ctl);
        });
        scenarios.push_back(Scenario{sc.weight, std::move(sol.clock), sc.boundary});
        reports.push_back(sol.report);
    }
    return RandomClockSolution{ScenarioSet(std::move(scenarios)), std::move(reports)};
}

RandomVarianceSolution variance_solution_random(
    const std::vector<RandomScenarioPdfTarget>& targets, const SeriesControl& ctl) {
    if (targets.empty()) throw validation_error("random inverse: no scenarios");
    RandomVarianceSolution out;
    out.variances.reserve(targets.size());
    out.reports.reserve(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto& sc = targets[i];
        VarianceSolution sol = with_scenario_context(i, [&] {
            if (const auto* one = std::get_if<OneSidedBoundary>(&sc.boundary)) {
                require_normalized_one_sided(*one);
                return variance_solution_one_sided(sc.target, *one);
            }
            return variance_solution_two_sided(sc.target,
                                               std::get<TwoSidedBoundary>(sc.boundary), ctl);
        });
        out.variances.push_back(std::move(sol.variance));
        out.reports.push_back(sol.report);
    }
    return out;
}

} // namespace fptqv
