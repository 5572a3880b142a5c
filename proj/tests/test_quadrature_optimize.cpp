#include <stdexcept>
#include <cmath>

#include "doctest.h"

#include "minpen/common.hpp"
#include "minpen/optimize.hpp"
#include "minpen/quadrature.hpp"

using namespace minpen;

TEST_CASE("adaptive simpson on smooth integrands") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0) ==
          doctest::Approx(9.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
    CHECK(integrate([](double) { return 2.5; }, -1.0, 1.0) ==
          doctest::Approx(5.0));
    CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("divergent integrand reports +inf") {
    const double v = integrate(
        [](double x) { return x < 0.5 ? 1.0 : infinity; }, 0.0, 1.0);
    CHECK(!is_finite(v));
    CHECK(v > 0.0);
}

TEST_CASE("integrate rejects reversed bounds") {
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("golden section finds a quadratic peak") {
    std::size_t evals = 0;
    const double x = golden_section_max(
        [](double t) { return -(t - 0.7) * (t - 0.7); }, -2.0, 2.0, 200, 1e-10,
        &evals);
    CHECK(x == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(evals > 0);
}

TEST_CASE("grid scan keeps the lowest index on ties") {
    // Constant objective: every point ties, the first one must win.
    const SearchPoint p = grid_scan_max([](const std::vector<double>&) { return 1.0; },
                                        {0.0, 0.0}, {1.0, 1.0}, 3);
    CHECK(p.x[0] == -1.0);
    CHECK(p.x[1] == -1.0);
    CHECK(p.value == 1.0);
}

TEST_CASE("nelder mead climbs a concave bowl") {
    const SearchPoint p = nelder_mead_max(
        [](const std::vector<double>& x) {
            return -(x[0] - 1.0) * (x[0] - 1.0) - 2.0 * (x[1] + 0.5) * (x[1] + 0.5);
        },
        {0.0, 0.0}, 0.5);
    CHECK(p.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(p.x[1] == doctest::Approx(-0.5).epsilon(1e-4));
}

TEST_CASE("box search shrinks onto the optimum") {
    const BoxSearchResult r = box_search_max(
        [](const std::vector<double>& x) {
            return -std::pow(x[0] - 0.3, 2) - std::pow(x[1] - 0.1, 2);
        },
        {0.0, 0.0}, {2.0, 2.0}, 5, 8);
    CHECK(r.argmax[0] == doctest::Approx(0.3).epsilon(1e-5));
    CHECK(r.argmax[1] == doctest::Approx(0.1).epsilon(1e-5));
    CHECK(r.value == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("infeasible region handled by box search") {
    // Feasible only on x <= 0.5; the max sits at the constraint edge.
    const BoxSearchResult r = box_search_max(
        [](const std::vector<double>& x) {
            return x[0] > 0.5 ? -infinity : x[0];
        },
        {0.0}, {1.0}, 9, 10);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-6));
}
