#include <stdexcept>
#include <cmath>

#include "doctest.h"

#include "minpen/convergence.hpp"

using namespace minpen;

namespace {

ConvergenceExperiment brownian_shrink(std::size_t paths) {
    const LevyTriplet model(0.0, true, {});
    return ConvergenceExperiment{
        model,
        1.0,
        64,
        GirsanovCoefficients::constant(0.0, 0.0, model, 1.0),
        [model](int n) {
            return GirsanovCoefficients::constant(1.0 / n, 0.0, model, 1.0);
        },
        {1, 2, 4, 8},
        0.01,
        paths,
        RngStream{404, 0}};
}

}  // namespace

TEST_CASE("l1 distance tracks the closed form for theta0 = 1/n") {
    const ConvergenceTable table = run_convergence(brownian_shrink(4000));
    REQUIRE(table.rows.size() == 4);
    for (const ConvergenceRow& row : table.rows) {
        // E|exp(tW - t^2/2) - 1| = 2 erf(t / (2 sqrt 2)) at horizon 1
        const double t = 1.0 / row.n;
        const double closed = 2.0 * std::erf(t / (2.0 * std::sqrt(2.0)));
        CHECK(std::fabs(row.l1_mean - closed) <=
              std::max(4.0 * row.l1_se, 5e-3));
    }
    CHECK(table.l1_nonincreasing);
}

TEST_CASE("qv exceedance falls with n") {
    const ConvergenceTable table = run_convergence(brownian_shrink(2000));
    CHECK(table.rows.front().qv_exceedance >=
          table.rows.back().qv_exceedance);
    for (const ConvergenceRow& row : table.rows) {
        CHECK(row.qv_exceedance >= 0.0);
        CHECK(row.qv_exceedance <= 1.0);
    }
}

TEST_CASE("infinite stop level reproduces the plain run bit for bit") {
    const ConvergenceExperiment experiment = brownian_shrink(500);
    const ConvergenceTable a = run_convergence(experiment);
    const ConvergenceTable b = stopped_variant(experiment, infinity);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t m = 0; m < a.rows.size(); ++m) {
        CHECK(a.rows[m].l1_mean == b.rows[m].l1_mean);
        CHECK(a.rows[m].l1_se == b.rows[m].l1_se);
        CHECK(a.rows[m].qv_exceedance == b.rows[m].qv_exceedance);
    }
}

TEST_CASE("stopping can only lower the qv exceedance") {
    const ConvergenceExperiment experiment = brownian_shrink(500);
    const ConvergenceTable full = run_convergence(experiment);
    const ConvergenceTable stopped = stopped_variant(experiment, 0.25);
    // QV accumulates nonnegative increments, so truncating at tau <= T keeps
    // every exceedance indicator at or below its full-horizon value.
    for (std::size_t m = 0; m < full.rows.size(); ++m)
        CHECK(stopped.rows[m].qv_exceedance <= full.rows[m].qv_exceedance);
}

TEST_CASE("experiment validation") {
    ConvergenceExperiment bad = brownian_shrink(500);
    bad.n_values.clear();
    CHECK_THROWS_AS(run_convergence(bad), std::invalid_argument);
    ConvergenceExperiment few = brownian_shrink(1);
    CHECK_THROWS_AS(run_convergence(few), std::invalid_argument);
    ConvergenceExperiment eps = brownian_shrink(500);
    eps.epsilon = -1.0;
    CHECK_THROWS_AS(run_convergence(eps), std::invalid_argument);
}
