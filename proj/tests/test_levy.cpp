#include <stdexcept>
#include <cmath>

#include "doctest.h"

#include "minpen/levy.hpp"

using namespace minpen;

namespace {
const LevyTriplet two_atoms(0.0, true, {{-0.5, 1.0}, {1.0, 0.5}});
}

TEST_CASE("triplet validation") {
    CHECK_THROWS_AS(LevyTriplet(0.0, true, {{0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(LevyTriplet(0.0, true, {{1.0, -0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(LevyTriplet(0.0, true, {{1.0, 0.5}, {1.0, 0.2}}),
                    std::invalid_argument);
    CHECK(two_atoms.total_rate() == doctest::Approx(1.5));
    CHECK(two_atoms.compensated_drift() == doctest::Approx(-0.5 + 0.5));
}

TEST_CASE("paths are reproducible and share the exact horizon") {
    const LevyPath a = simulate_path(two_atoms, 1.0, 64, {42, 7});
    const LevyPath b = simulate_path(two_atoms, 1.0, 64, {42, 7});
    CHECK(a.brownian == b.brownian);
    CHECK(a.level == b.level);
    CHECK(a.jumps.size() == b.jumps.size());
    CHECK(a.times.back() == 1.0);
    CHECK(a.times.size() == 65);

    const LevyPath c = simulate_path(two_atoms, 1.0, 64, {42, 8});
    CHECK(a.brownian != c.brownian);
}

TEST_CASE("jump times are strictly increasing and inside the horizon") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const LevyPath path = simulate_path(two_atoms, 2.0, 32, {5, s});
        for (std::size_t j = 0; j < path.jumps.size(); ++j) {
            CHECK(path.jumps[j].time > 0.0);
            CHECK(path.jumps[j].time <= 2.0);
            if (j > 0) CHECK(path.jumps[j].time > path.jumps[j - 1].time);
        }
    }
}

TEST_CASE("disabled brownian part stays at zero") {
    const LevyTriplet jump_only(0.0, false, {{1.0, 2.0}});
    const LevyPath path = simulate_path(jump_only, 1.0, 16, {3, 0});
    for (double w : path.brownian) CHECK(w == 0.0);
    CHECK(!path.has_brownian);
}

TEST_CASE("empirical jump rates match the atom intensities") {
    const std::vector<LevyPath> paths = simulate_batch(two_atoms, 1.0, 16, 4000, {11, 0});
    // 3 sigma tubes: rate 1.0 -> se ~ sqrt(1/4000) ~ 0.016
    CHECK(empirical_compensator(paths, 0, two_atoms) ==
          doctest::Approx(1.0).epsilon(0.06));
    CHECK(empirical_compensator(paths, 1, two_atoms) ==
          doctest::Approx(0.5).epsilon(0.09));
}

TEST_CASE("terminal level agrees with the triplet mean") {
    const LevyTriplet model(0.3, true, {{-0.5, 1.0}, {2.0, 0.25}});
    const std::size_t n = 4000;
    double mean = 0.0;
    for (std::size_t p = 0; p < n; ++p)
        mean += simulate_path(model, 1.0, 16, RngStream{21, p}).level.back() / n;
    // E[L_1] = drift + sum_{|x|>1} x rate = 0.3 + 0.5; the compensated atom
    // contributes drift -0.5 plus jump mean +0.5.
    CHECK(model.expected_level(1.0) == doctest::Approx(0.8));
    CHECK(mean == doctest::Approx(0.8).epsilon(0.12));
}

TEST_CASE("level steps by the jump size at each jump") {
    const LevyPath path = simulate_path(two_atoms, 1.0, 128, {77, 1});
    for (const JumpEvent& ev : path.jumps) {
        CHECK((ev.atom == 0 || ev.atom == 1));
        CHECK(ev.size == two_atoms.atoms()[ev.atom].size);
    }
    CHECK(path.jump_count(0) + path.jump_count(1) == path.jumps.size());
}
