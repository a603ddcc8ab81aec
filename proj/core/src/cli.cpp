#include "fptqv/cli.hpp"

#include "fptqv/errors.hpp"
#include "fptqv/grid_io.hpp"
#include "fptqv/inverse_fpt.hpp"
#include "fptqv/time_change.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>

namespace fptqv::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail_validation(const std::string& msg) { throw validation_error(msg); }

const char* error_kind(const std::exception& e) {
    if (dynamic_cast<const saturation_error*>(&e)) return "saturation";
    if (dynamic_cast<const assumption_error*>(&e)) return "assumption";
    if (dynamic_cast<const convergence_error*>(&e)) return "convergence";
    if (dynamic_cast<const domain_error*>(&e)) return "domain";
    if (dynamic_cast<const validation_error*>(&e)) return "validation";
    return "internal";
}

int guard(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        json line = {{"error",
                      {{"exit", code}, {"kind", error_kind(e)}, {"message", e.what()}}}};
        std::cerr << line.dump() << "\n";
        return code;
    }
}

void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                 const std::string& ctx) {
    if (!j.is_object()) fail_validation("config: " + ctx + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (key == k) known = true;
        if (!known) fail_validation("config: unknown key '" + key + "' in " + ctx);
    }
}

double number_at(const json& j, const char* key, const std::string& ctx) {
    if (!j.at(key).is_number()) fail_validation("config: " + ctx + "." + key + " must be a number");
    return j.at(key).get<double>();
}

QuadraticVariationPath parse_clock(const std::string& spec) {
    if (spec.empty()) fail_validation("clock: empty specification");
    if (spec == "identity") return QuadraticVariationPath::identity();
    if (spec.rfind("linear:", 0) == 0) {
        const std::string num = spec.substr(7);
        double rate = 0.0;
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), rate);
        if (ec != std::errc{} || ptr != num.data() + num.size())
            fail_validation("clock: bad rate in '" + spec + "'");
        return QuadraticVariationPath::linear(rate);
    }
    const GridTable table = read_grid_csv(spec);
    const auto& cols = table.columns;
    const bool ok = (cols == std::vector<std::string>{"t", "v"}) ||
                    (cols == std::vector<std::string>{"t", "value"}) ||
                    (cols == std::vector<std::string>{"t", "v", "sigma2"});
    if (!ok)
        fail_validation("clock file " + spec +
                        ": expected columns (t,v), (t,value) or (t,v,sigma2)");
    return QuadraticVariationPath::from_grid(table.column("t"),
                                             table.data[1]); // v or value
}

std::vector<double> load_time_grid(const std::string& path) {
    if (path.empty()) fail_validation("forward: --grid FILE is required");
    const GridTable table = read_grid_csv(path);
    const auto& cols = table.columns;
    if (!(cols == std::vector<std::string>{"t"} ||
          cols == std::vector<std::string>{"t", "value"}))
        fail_validation("grid file " + path + ": expected columns (t) or (t,value)");
    return table.column("t");
}

SurvivalCdf load_cdf_target(const std::string& path) {
    const GridTable table = read_grid_csv(path);
    const auto& cols = table.columns;
    if (cols == std::vector<std::string>{"t", "value"} ||
        cols == std::vector<std::string>{"t", "cdf"} ||
        cols == std::vector<std::string>{"t", "cdf", "pdf"})
        return SurvivalCdf::from_knots(table.column("t"), table.data[1]);
    fail_validation("target file " + path +
                    ": expected columns (t,value), (t,cdf) or (t,cdf,pdf)");
}

SurvivalPdf load_pdf_target(const std::string& path) {
    const GridTable table = read_grid_csv(path);
    const auto& cols = table.columns;
    if (cols == std::vector<std::string>{"t", "value"} ||
        cols == std::vector<std::string>{"t", "pdf"})
        return SurvivalPdf::from_knots(table.column("t"), table.data[1]);
    if (cols == std::vector<std::string>{"t", "cdf", "pdf"})
        return SurvivalPdf::from_knots(table.column("t"), table.column("pdf"));
    fail_validation("pdf target file " + path +
                    ": expected columns (t,value), (t,pdf) or (t,cdf,pdf)");
}

Boundary make_boundary(const std::optional<double>& upper, const std::optional<double>& lower,
                       const std::string& ctx) {
    if (!upper) fail_validation(ctx + ": --boundary-upper is required");
    if (lower) return TwoSidedBoundary(*upper, *lower);
    return OneSidedBoundary(*upper);
}

void require_out(const RunConfig& c) {
    if (c.out.empty()) fail_validation("--out FILE is required");
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_validation("cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) fail_validation("failed writing file: " + path);
}

json report_to_json(const InverseReport& rep) {
    json j;
    j["k0"] = std::isfinite(rep.thresholds.k0) ? json(rep.thresholds.k0) : json();
    j["k1"] = std::isfinite(rep.thresholds.k1) ? json(rep.thresholds.k1) : json();
    j["assumption_k1_infinite"] = rep.assumption_k1_infinite;
    j["local_integrability_ok"] = rep.local_integrability_ok;
    j["clamped_knots"] = rep.clamped_knots;
    return j;
}

ScenarioSet build_scenario_set(const RunConfig& config) {
    std::vector<Scenario> list;
    for (std::size_t i = 0; i < config.scenarios.size(); ++i) {
        const auto& spec = config.scenarios[i];
        const auto upper = spec.boundary_upper ? spec.boundary_upper : config.boundary_upper;
        const auto lower = spec.boundary_lower ? spec.boundary_lower : config.boundary_lower;
        list.push_back(Scenario{spec.weight, parse_clock(spec.clock),
                                make_boundary(upper, lower,
                                              "scenario " + std::to_string(i))});
    }
    return ScenarioSet(std::move(list));
}

bool all_two_sided(const ScenarioSet& set) {
    for (const auto& s : set.scenarios())
        if (!std::holds_alternative<TwoSidedBoundary>(s.boundary)) return false;
    return true;
}

bool all_one_sided(const ScenarioSet& set) {
    for (const auto& s : set.scenarios())
        if (!std::holds_alternative<OneSidedBoundary>(s.boundary)) return false;
    return true;
}

std::string scenario_out_path(const std::string& base, std::size_t index) {
    const auto dot = base.rfind('.');
    const auto slash = base.rfind('/');
    const std::string suffix = ".s" + std::to_string(index);
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return base + suffix;
    return base.substr(0, dot) + suffix + base.substr(dot);
}

GridTable empirical_to_table(const EmpiricalCdf& emp) {
    GridTable out;
    out.columns = {"t", "empirical_cdf"};
    out.data.assign(2, {});
    const double n = static_cast<double>(emp.n_paths);
    for (std::size_t i = 0; i < emp.times.size(); ++i) {
        if (i + 1 < emp.times.size() && emp.times[i + 1] == emp.times[i]) continue;
        out.data[0].push_back(emp.times[i]);
        out.data[1].push_back(static_cast<double>(i + 1) / n);
    }
    return out;
}

} // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const assumption_error*>(&e)) return 3;
    if (dynamic_cast<const convergence_error*>(&e)) return 4;
    return 2; // validation, domain, saturation, I/O and anything unexpected
}

RunConfig load_config_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_validation("cannot open config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        fail_validation("config " + path + ": " + e.what());
    }

    RunConfig c;
    expect_keys(j, {"boundary", "clock", "grid", "target", "pdf_target", "out", "compare",
                    "sim", "series", "scenarios"},
                "top level");
    if (j.contains("boundary")) {
        expect_keys(j["boundary"], {"upper", "lower"}, "boundary");
        if (j["boundary"].contains("upper"))
            c.boundary_upper = number_at(j["boundary"], "upper", "boundary");
        if (j["boundary"].contains("lower"))
            c.boundary_lower = number_at(j["boundary"], "lower", "boundary");
    }
    if (j.contains("clock")) c.clock = j["clock"].get<std::string>();
    if (j.contains("grid")) c.grid = j["grid"].get<std::string>();
    if (j.contains("target")) c.target = j["target"].get<std::string>();
    if (j.contains("pdf_target")) c.pdf_target = j["pdf_target"].get<std::string>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("compare")) c.compare = j["compare"].get<bool>();
    if (j.contains("sim")) {
        const auto& s = j["sim"];
        expect_keys(s, {"paths", "clock_steps", "seed", "bridge_correction", "horizon"}, "sim");
        if (s.contains("paths")) c.sim.n_paths = s["paths"].get<std::int64_t>();
        if (s.contains("clock_steps")) c.sim.clock_steps = s["clock_steps"].get<std::int64_t>();
        if (s.contains("seed")) c.sim.seed = s["seed"].get<std::uint64_t>();
        if (s.contains("bridge_correction"))
            c.sim.bridge_correction = s["bridge_correction"].get<bool>();
        if (s.contains("horizon")) c.sim.horizon = number_at(s, "horizon", "sim");
        if (c.sim.n_paths < 1) fail_validation("config: sim.paths must be >= 1");
        if (c.sim.clock_steps < 1) fail_validation("config: sim.clock_steps must be >= 1");
        if (!(c.sim.horizon > 0.0)) fail_validation("config: sim.horizon must be > 0");
    }
    if (j.contains("series")) {
        const auto& s = j["series"];
        expect_keys(s, {"term_tol", "max_terms"}, "series");
        if (s.contains("term_tol")) c.series.term_tol = number_at(s, "term_tol", "series");
        if (s.contains("max_terms")) c.series.max_terms = s["max_terms"].get<std::size_t>();
        if (!(c.series.term_tol > 0.0)) fail_validation("config: series.term_tol must be > 0");
        if (c.series.max_terms < 1) fail_validation("config: series.max_terms must be >= 1");
    }
    if (j.contains("scenarios")) {
        if (!j["scenarios"].is_array()) fail_validation("config: scenarios must be an array");
        for (const auto& sj : j["scenarios"]) {
            expect_keys(sj, {"weight", "clock", "boundary", "target", "pdf_target"},
                        "scenarios[]");
            ScenarioSpec spec;
            if (sj.contains("weight")) spec.weight = number_at(sj, "weight", "scenarios[]");
            if (sj.contains("clock")) spec.clock = sj["clock"].get<std::string>();
            if (sj.contains("boundary")) {
                expect_keys(sj["boundary"], {"upper", "lower"}, "scenarios[].boundary");
                if (sj["boundary"].contains("upper"))
                    spec.boundary_upper = number_at(sj["boundary"], "upper", "scenario boundary");
                if (sj["boundary"].contains("lower"))
                    spec.boundary_lower = number_at(sj["boundary"], "lower", "scenario boundary");
            }
            if (sj.contains("target")) spec.target = sj["target"].get<std::string>();
            if (sj.contains("pdf_target")) spec.pdf_target = sj["pdf_target"].get<std::string>();
            c.scenarios.push_back(std::move(spec));
        }
    }
    return c;
}

int cmd_forward(const RunConfig& config) {
    return guard([&] {
        require_out(config);
        const std::vector<double> grid = load_time_grid(config.grid);

        GridTable out;
        out.columns = {"t", "cdf", "pdf"};
        out.data.assign(3, {});

        const auto emit = [&](double t, double cdf, double pdf) {
            out.data[0].push_back(t);
            out.data[1].push_back(cdf);
            out.data[2].push_back(pdf);
        };

        if (config.scenarios.empty()) {
            const Boundary b =
                make_boundary(config.boundary_upper, config.boundary_lower, "forward");
            const QuadraticVariationPath clock = parse_clock(config.clock);
            for (double t : grid) {
                if (const auto* one = std::get_if<OneSidedBoundary>(&b))
                    emit(t, crossing_cdf_one_sided(clock, *one, t),
                         crossing_pdf_one_sided(clock, *one, t));
                else {
                    const auto& two = std::get<TwoSidedBoundary>(b);
                    emit(t, crossing_cdf_two_sided(clock, two, t, config.series),
                         crossing_pdf_two_sided(clock, two, t, config.series));
                }
            }
        } else {
            const ScenarioSet set = build_scenario_set(config);
            if (all_one_sided(set)) {
                for (double t : grid)
                    emit(t, mixture_cdf_one_sided(set, t), mixture_pdf_one_sided(set, t));
            } else if (all_two_sided(set)) {
                for (double t : grid)
                    emit(t, mixture_cdf_two_sided(set, t, config.series),
                         mixture_pdf_two_sided(set, t, config.series));
            } else {
                fail_validation("scenarios: boundaries must be all one-sided or all two-sided");
            }
        }
        write_grid_csv(config.out, out);
    });
}

namespace {

void solve_deterministic_inverse(const RunConfig& config) {
    const Boundary b = make_boundary(config.boundary_upper, config.boundary_lower, "inverse");
    const std::string report_path = config.out + ".report.json";

    if (!config.pdf_target.empty()) {
        const SurvivalPdf f = load_pdf_target(config.pdf_target);
        InverseReport rep = analyze_target(f.induced_cdf());
        if (rep.assumption_k1_infinite)
            rep.local_integrability_ok = check_local_integrability(f, b, config.series);
        write_json_file(report_path, report_to_json(rep));
        if (!rep.assumption_k1_infinite)
            throw assumption_error("inverse: target cdf reaches 1 at finite time (K1 = " +
                                   format_number(rep.thresholds.k1) + "); report at " +
                                   report_path);
        if (!rep.local_integrability_ok)
            throw assumption_error(
                "inverse: variance solution not locally integrable at K0; report at " +
                report_path);

        const VarianceSolution sol =
            std::holds_alternative<OneSidedBoundary>(b)
                ? variance_solution_one_sided(f, std::get<OneSidedBoundary>(b))
                : variance_solution_two_sided(f, std::get<TwoSidedBoundary>(b), config.series);

        GridTable out;
        out.columns = {"t", "v", "sigma2"};
        out.data.assign(3, {});
        double acc = 0.0;
        const auto& vf = sol.variance;
        for (std::size_t i = 0; i < vf.times.size(); ++i) {
            if (i > 0)
                acc += 0.5 * (vf.values[i] + vf.values[i - 1]) * (vf.times[i] - vf.times[i - 1]);
            out.data[0].push_back(vf.times[i]);
            out.data[1].push_back(acc);
            out.data[2].push_back(vf.values[i]);
        }
        write_grid_csv(config.out, out);
        return;
    }

    if (config.target.empty())
        fail_validation("inverse: --target FILE or --pdf-target FILE is required");
    const SurvivalCdf F = load_cdf_target(config.target);
    const InverseReport rep = analyze_target(F);
    write_json_file(report_path, report_to_json(rep));
    if (!rep.assumption_k1_infinite)
        throw assumption_error("inverse: target cdf reaches 1 at finite time (K1 = " +
                               format_number(rep.thresholds.k1) + "); report at " + report_path);

    const ClockSolution sol =
        std::holds_alternative<OneSidedBoundary>(b)
            ? qv_solution_one_sided(F, std::get<OneSidedBoundary>(b))
            : qv_solution_two_sided(F, std::get<TwoSidedBoundary>(b), config.series);

    GridTable out;
    out.columns = {"t", "v"};
    out.data = {sol.clock.grid_times(), sol.clock.grid_values()};
    write_grid_csv(config.out, out);
}

void solve_random_inverse(const RunConfig& config) {
    const std::string report_path = config.out + ".report.json";
    const bool pdf_route = !config.scenarios.front().pdf_target.empty();

    json reports = json::array();
    bool all_ok = true;

    if (pdf_route) {
        std::vector<RandomScenarioPdfTarget> targets;
        for (std::size_t i = 0; i < config.scenarios.size(); ++i) {
            const auto& spec = config.scenarios[i];
            if (spec.pdf_target.empty())
                fail_validation("scenario " + std::to_string(i) +
                                ": all scenarios must use pdf_target on the pdf route");
            const auto upper = spec.boundary_upper ? spec.boundary_upper : config.boundary_upper;
            const auto lower = spec.boundary_lower ? spec.boundary_lower : config.boundary_lower;
            targets.push_back(RandomScenarioPdfTarget{
                spec.weight, load_pdf_target(spec.pdf_target),
                make_boundary(upper, lower, "scenario " + std::to_string(i))});
        }
        for (const auto& t : targets) {
            InverseReport rep = analyze_target(t.target.induced_cdf());
            if (rep.assumption_k1_infinite)
                rep.local_integrability_ok =
                    check_local_integrability(t.target, t.boundary, config.series);
            all_ok = all_ok && rep.assumption_k1_infinite && rep.local_integrability_ok;
            reports.push_back(report_to_json(rep));
        }
        write_json_file(report_path, json{{"scenarios", reports}});
        if (!all_ok)
            throw assumption_error("inverse: a scenario fails the solvability assumptions; "
                                   "report at " + report_path);
        const RandomVarianceSolution sol = variance_solution_random(targets, config.series);
        for (std::size_t i = 0; i < sol.variances.size(); ++i) {
            GridTable out;
            out.columns = {"t", "v", "sigma2"};
            out.data.assign(3, {});
            const auto& vf = sol.variances[i];
            double acc = 0.0;
            for (std::size_t k = 0; k < vf.times.size(); ++k) {
                if (k > 0)
                    acc += 0.5 * (vf.values[k] + vf.values[k - 1]) *
                           (vf.times[k] - vf.times[k - 1]);
                out.data[0].push_back(vf.times[k]);
                out.data[1].push_back(acc);
                out.data[2].push_back(vf.values[k]);
            }
            write_grid_csv(scenario_out_path(config.out, i), out);
        }
        return;
    }

    std::vector<RandomScenarioTarget> targets;
    for (std::size_t i = 0; i < config.scenarios.size(); ++i) {
        const auto& spec = config.scenarios[i];
        if (spec.target.empty())
            fail_validation("scenario " + std::to_string(i) + ": target file is required");
        const auto upper = spec.boundary_upper ? spec.boundary_upper : config.boundary_upper;
        const auto lower = spec.boundary_lower ? spec.boundary_lower : config.boundary_lower;
        targets.push_back(RandomScenarioTarget{
            spec.weight, load_cdf_target(spec.target),
            make_boundary(upper, lower, "scenario " + std::to_string(i))});
    }
    for (const auto& t : targets) {
        const InverseReport rep = analyze_target(t.target);
        all_ok = all_ok && rep.assumption_k1_infinite;
        reports.push_back(report_to_json(rep));
    }
    write_json_file(report_path, json{{"scenarios", reports}});
    if (!all_ok)
        throw assumption_error("inverse: a scenario's target cdf reaches 1 at finite time; "
                               "report at " + report_path);
    const RandomClockSolution sol = qv_solution_random(targets, config.series);
    const auto& scenarios = sol.scenarios.scenarios();
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        GridTable out;
        out.columns = {"t", "v"};
        out.data = {scenarios[i].clock.grid_times(), scenarios[i].clock.grid_values()};
        write_grid_csv(scenario_out_path(config.out, i), out);
    }
}

} // namespace

int cmd_inverse(const RunConfig& config) {
    return guard([&] {
        require_out(config);
        if (config.scenarios.empty())
            solve_deterministic_inverse(config);
        else
            solve_random_inverse(config);
    });
}

int cmd_simulate(const RunConfig& config) {
    return guard([&] {
        require_out(config);

        EmpiricalCdf emp;
        std::function<double(double)> analytic;

        if (config.scenarios.empty()) {
            const Boundary b =
                make_boundary(config.boundary_upper, config.boundary_lower, "simulate");
            const QuadraticVariationPath clock = parse_clock(config.clock);
            if (const auto* one = std::get_if<OneSidedBoundary>(&b)) {
                emp = simulate_one_sided(clock, *one, config.sim);
                if (config.compare) {
                    const OneSidedBoundary bb = *one;
                    analytic = [clock, bb](double t) {
                        return crossing_cdf_one_sided(clock, bb, t);
                    };
                }
            } else {
                const TwoSidedBoundary two = std::get<TwoSidedBoundary>(b);
                emp = simulate_two_sided(clock, two, config.sim);
                if (config.compare) {
                    const SeriesControl ctl = config.series;
                    analytic = [clock, two, ctl](double t) {
                        return crossing_cdf_two_sided(clock, two, t, ctl);
                    };
                }
            }
        } else {
            const ScenarioSet set = build_scenario_set(config);
            emp = simulate_mixture(set, config.sim);
            if (config.compare) {
                const SeriesControl ctl = config.series;
                if (all_one_sided(set)) {
                    auto shared = std::make_shared<ScenarioSet>(set);
                    analytic = [shared](double t) { return mixture_cdf_one_sided(*shared, t); };
                } else if (all_two_sided(set)) {
                    auto shared = std::make_shared<ScenarioSet>(set);
                    analytic = [shared, ctl](double t) {
                        return mixture_cdf_two_sided(*shared, t, ctl);
                    };
                } else {
                    fail_validation(
                        "scenarios: boundaries must be all one-sided or all two-sided");
                }
            }
        }

        json summary = {{"n_paths", emp.n_paths},
                        {"censored", emp.censored_count},
                        {"seed", config.sim.seed},
                        {"horizon", config.sim.horizon},
                        {"ecdf_at_horizon",
                         static_cast<double>(emp.times.size()) /
                             static_cast<double>(emp.n_paths)}};
        if (config.compare) summary["ks_vs_analytic"] = ks_distance(emp, analytic);

        write_grid_csv(config.out, empirical_to_table(emp));
        write_json_file(config.out + ".summary.json", summary);
    });
}

} // namespace fptqv::cli
