#include "fptqv/time_change.hpp"

#include "fptqv/errors.hpp"

#include "constants.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace fptqv;

namespace {
const OneSidedBoundary unit(1.0);

QuadraticVariationPath random_monotone_grid(std::mt19937& gen, int knots) {
    std::uniform_real_distribution<double> dt(0.05, 1.0);
    std::uniform_real_distribution<double> dv(0.0, 1.0);
    std::bernoulli_distribution flat(0.3);
    std::vector<double> t{0.0}, v{0.0};
    for (int i = 0; i < knots; ++i) {
        t.push_back(t.back() + dt(gen));
        v.push_back(v.back() + (flat(gen) ? 0.0 : dv(gen)));
    }
    return QuadraticVariationPath::from_grid(t, v);
}
} // namespace

TEST_CASE("grid construction validation") {
    CHECK_THROWS_AS(QuadraticVariationPath::from_grid({0.0}, {0.0}), validation_error);
    CHECK_THROWS_AS(QuadraticVariationPath::from_grid({0.1, 1.0}, {0.0, 1.0}),
                    validation_error);
    CHECK_THROWS_AS(QuadraticVariationPath::from_grid({0.0, 1.0}, {0.5, 1.0}),
                    validation_error);
    CHECK_THROWS_AS(QuadraticVariationPath::from_grid({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}),
                    validation_error);
    CHECK_THROWS_AS(QuadraticVariationPath::from_grid({0.0, 1.0, 2.0}, {0.0, 1.0, 0.5}),
                    validation_error);
}

TEST_CASE("qv_eval basics") {
    const auto id = QuadraticVariationPath::identity();
    CHECK(id.value(0.0) == 0.0);
    CHECK(id.value(3.5) == 3.5);

    const auto grid = QuadraticVariationPath::from_grid({0.0, 1.0, 2.0}, {0.0, 2.0, 2.5});
    CHECK(grid.value(0.5) == doctest::Approx(1.0));
    CHECK(grid.value(1.0) == 2.0); // exact at knots
    CHECK(grid.value(2.0) == 2.5);
    CHECK_THROWS_AS(grid.value(2.5), domain_error);
    CHECK_THROWS_AS(grid.value(-0.5), domain_error);
}

TEST_CASE("qv_derivative basics") {
    CHECK(QuadraticVariationPath::identity().derivative(17.0) == 1.0);
    const auto two = QuadraticVariationPath::from_grid({0.0, 1.0}, {0.0, 2.0});
    CHECK(two.derivative(0.5) == 2.0);
    const auto grid = QuadraticVariationPath::from_grid({0.0, 1.0, 2.0}, {0.0, 2.0, 2.5});
    CHECK(grid.derivative(1.0) == 0.5); // right-hand slope at the knot
    CHECK(grid.derivative(2.0) == 0.5);

    const auto no_dv = QuadraticVariationPath::closed_form(
        [](double t) { return t * t; }, nullptr, 10.0);
    CHECK_THROWS_AS(no_dv.derivative(1.0), domain_error);
}

TEST_CASE("generalized inverse basics") {
    CHECK(QuadraticVariationPath::identity().generalized_inverse(2.0) == 2.0);
    const auto plateau =
        QuadraticVariationPath::from_grid({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 1.0, 4.0});
    CHECK(plateau.generalized_inverse(1.0) == 2.0); // end of the flat stretch
    CHECK(plateau.generalized_inverse(0.5) == doctest::Approx(0.5));
    CHECK_THROWS_AS(plateau.generalized_inverse(4.0), domain_error);
    CHECK_THROWS_AS(plateau.generalized_inverse(5.0), domain_error);

    const auto quad = QuadraticVariationPath::closed_form(
        [](double t) { return t * t; }, [](double t) { return 2.0 * t; }, 100.0);
    CHECK(quad.generalized_inverse(9.0) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("generalized inverse properties on random monotone grids") {
    std::mt19937 gen(20240612);
    for (int rep = 0; rep < 50; ++rep) {
        const auto path = random_monotone_grid(gen, 12);
        const double total = path.value(path.domain_end());
        if (total == 0.0) continue;
        std::uniform_real_distribution<double> us(0.0, std::nextafter(total, 0.0));
        for (int i = 0; i < 40; ++i) {
            const double s = us(gen);
            if (s >= total) continue;
            const double t = path.generalized_inverse(s);
            CHECK(path.value(t) >= s - 1e-12);
            // right-continuity: inf over {v > s} means a nudge right strictly exceeds s
            const double t_eps = std::min(path.domain_end(), t + 1e-9);
            CHECK(path.value(t_eps) >= s);
        }
        for (int i = 0; i < 20; ++i) {
            std::uniform_real_distribution<double> ut(0.0, path.domain_end());
            const double t = ut(gen);
            const double vt = path.value(t);
            if (vt >= total) continue;
            CHECK(path.generalized_inverse(vt) >= t - 1e-12);
        }
    }
}

TEST_CASE("composition law holds bit-for-bit") {
    const auto grid = QuadraticVariationPath::from_grid({0.0, 0.5, 2.0, 3.0},
                                                        {0.0, 1.0, 1.5, 4.0});
    for (double t : {0.1, 0.5, 1.9, 3.0})
        CHECK(crossing_cdf_one_sided(grid, unit, t) == levy_cdf(unit, grid.value(t)));
}

TEST_CASE("crossing cdf under linear clocks") {
    const auto id = QuadraticVariationPath::identity();
    for (double t : {0.1, 1.0, 7.0})
        CHECK(crossing_cdf_one_sided(id, unit, t) == levy_cdf(unit, t));

    const auto four = QuadraticVariationPath::linear(4.0);
    CHECK(crossing_cdf_one_sided(four, OneSidedBoundary(2.0), 1.0) ==
          doctest::Approx(ref::levy_cdf_1_1).epsilon(1e-15));
}

TEST_CASE("time-change invariance against the identity clock") {
    std::mt19937 gen(99);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    const auto id = QuadraticVariationPath::identity();
    for (int rep = 0; rep < 100; ++rep) {
        // strictly increasing random clock
        std::vector<double> t{0.0}, v{0.0};
        for (int i = 0; i < 6; ++i) {
            t.push_back(t.back() + u(gen));
            v.push_back(v.back() + u(gen));
        }
        const auto path = QuadraticVariationPath::from_grid(t, v);
        const double at = u(gen);
        CHECK(crossing_cdf_one_sided(path, unit, at) ==
              crossing_cdf_one_sided(id, unit, path.value(at)));
    }
}

TEST_CASE("plateau clocks freeze the crossing cdf") {
    const auto path =
        QuadraticVariationPath::from_grid({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 1.0, 2.0});
    const double at_start = crossing_cdf_one_sided(path, unit, 1.0);
    for (double t : {1.2, 1.5, 1.99, 2.0})
        CHECK(crossing_cdf_one_sided(path, unit, t) == at_start);
}

TEST_CASE("crossing pdf composes the chain rule") {
    const auto id = QuadraticVariationPath::identity();
    for (double t : {0.2, 1.0, 4.0})
        CHECK(crossing_pdf_one_sided(id, unit, t) == levy_pdf(unit, t));

    const auto lin = QuadraticVariationPath::linear(3.0);
    for (double t : {0.2, 1.0})
        CHECK(crossing_pdf_one_sided(lin, unit, t) == 3.0 * levy_pdf(unit, 3.0 * t));

    const auto smooth = QuadraticVariationPath::closed_form(
        [](double t) { return t + 0.5 * t * t; }, [](double t) { return 1.0 + t; }, 100.0);
    for (double t : {0.3, 1.0, 2.5}) {
        const double fd = oracle::central_difference(
            [&](double x) { return crossing_cdf_one_sided(smooth, unit, x); }, t, 1e-6);
        CHECK(crossing_pdf_one_sided(smooth, unit, t) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("two-sided crossing mirrors the one-sided structure") {
    const TwoSidedBoundary sym(1.0, -1.0);
    const auto id = QuadraticVariationPath::identity();
    CHECK(crossing_cdf_two_sided(id, sym, 1.0) == two_sided_cdf(sym, 1.0));
    CHECK(crossing_pdf_two_sided(id, sym, 1.0) == two_sided_pdf(sym, 1.0));

    const TwoSidedBoundary far(1.0, -8.0);
    CHECK(std::abs(crossing_cdf_two_sided(id, far, 1.0) - levy_cdf(unit, 1.0)) <= 1e-12);

    const auto lin = QuadraticVariationPath::linear(2.0);
    for (double t : {0.3, 1.0}) {
        const double fd = oracle::central_difference(
            [&](double x) { return crossing_cdf_two_sided(lin, sym, x); }, t, 1e-6);
        CHECK(crossing_pdf_two_sided(lin, sym, t) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("scenario set validation") {
    const auto id = QuadraticVariationPath::identity();
    CHECK_THROWS_AS(ScenarioSet({}), validation_error);
    CHECK_THROWS_AS(ScenarioSet({Scenario{0.5, id, unit}}), validation_error);
    CHECK_THROWS_AS(ScenarioSet({Scenario{-0.5, id, unit}, Scenario{1.5, id, unit}}),
                    validation_error);
    CHECK_NOTHROW(ScenarioSet({Scenario{0.5, id, unit}, Scenario{0.5, id, unit}}));
}

TEST_CASE("one-sided mixtures") {
    const auto id = QuadraticVariationPath::identity();
    const auto four = QuadraticVariationPath::linear(4.0);

    const ScenarioSet single({Scenario{1.0, id, unit}});
    for (double t : {0.3, 1.0, 2.0})
        CHECK(mixture_cdf_one_sided(single, t) == crossing_cdf_one_sided(id, unit, t));

    const ScenarioSet blend({Scenario{0.5, id, unit}, Scenario{0.5, four, unit}});
    CHECK(mixture_cdf_one_sided(blend, 1.0) ==
          doctest::Approx(0.5 * (ref::levy_cdf_1_1 + ref::levy_cdf_1_4)).epsilon(1e-15));
    CHECK(mixture_pdf_one_sided(single, 1.0) == crossing_pdf_one_sided(id, unit, 1.0));

    // non-normalized one-sided scenario is rejected
    const ScenarioSet bad({Scenario{1.0, id, OneSidedBoundary(2.0)}});
    CHECK_THROWS_AS(mixture_cdf_one_sided(bad, 1.0), validation_error);
    // two-sided scenario in a one-sided mixture is rejected
    const ScenarioSet wrong({Scenario{1.0, id, TwoSidedBoundary(1.0, -1.0)}});
    CHECK_THROWS_AS(mixture_cdf_one_sided(wrong, 1.0), validation_error);
}

TEST_CASE("mixture linearity is exact") {
    const auto slow = QuadraticVariationPath::linear(0.5);
    const auto fast = QuadraticVariationPath::linear(4.0);
    const double lambda = 0.25;

    const ScenarioSet mixed({Scenario{lambda, slow, unit}, Scenario{1.0 - lambda, fast, unit}});
    for (double t : {0.4, 1.0, 3.0}) {
        const double direct = lambda * crossing_cdf_one_sided(slow, unit, t) +
                              (1.0 - lambda) * crossing_cdf_one_sided(fast, unit, t);
        CHECK(mixture_cdf_one_sided(mixed, t) == direct);
    }
}

TEST_CASE("two-sided mixtures") {
    const auto id = QuadraticVariationPath::identity();
    const auto lin = QuadraticVariationPath::linear(2.0);
    const TwoSidedBoundary a(1.0, -1.0);
    const TwoSidedBoundary b(0.5, -1.5);

    const ScenarioSet single({Scenario{1.0, id, a}});
    CHECK(mixture_cdf_two_sided(single, 1.0) == crossing_cdf_two_sided(id, a, 1.0));

    const ScenarioSet blend({Scenario{0.3, id, a}, Scenario{0.7, lin, b}});
    for (double t : {0.5, 1.5}) {
        const double direct = 0.3 * crossing_cdf_two_sided(id, a, t) +
                              0.7 * crossing_cdf_two_sided(lin, b, t);
        CHECK(mixture_cdf_two_sided(blend, t) == direct);
        const double direct_pdf = 0.3 * crossing_pdf_two_sided(id, a, t) +
                                  0.7 * crossing_pdf_two_sided(lin, b, t);
        CHECK(mixture_pdf_two_sided(blend, t) == direct_pdf);
    }
}
