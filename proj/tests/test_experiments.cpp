#include <filesystem>
#include <string>

#include "doctest.h"

#include "minpen/experiments.hpp"

using namespace minpen;

namespace {

std::string serialize_all(const ExperimentOutput& out) {
    std::string blob;
    for (const CsvTable& t : out.tables) blob += t.filename + "\n" + t.serialize();
    return blob;
}

}  // namespace

TEST_CASE("config errors") {
    CHECK_THROWS_AS(run_config_text("not json"), ConfigError);
    CHECK_THROWS_AS(run_config_text("[1,2]"), ConfigError);
    CHECK_THROWS_AS(run_config_text(R"({"kind":"martingale"})"), ConfigError);
    CHECK_THROWS_AS(run_config_text(R"({"kind":"no_such","seed":1})"), ConfigError);
    CHECK_THROWS_AS(run_config_text(R"({"preset":"no_such"})"), ConfigError);
    CHECK_THROWS_AS(
        run_config_text(
            R"({"kind":"martingale","seed":1,"model":"no_such","theta":{}})"),
        ConfigError);
    // invalid component parameters surface as config errors too
    CHECK_THROWS_AS(
        run_config_text(
            R"({"kind":"martingale","seed":1,"model":"two_atoms",
                "theta":{"theta1":-2.0},"paths":100})"),
        ConfigError);
}

TEST_CASE("martingale preset runs and passes with overridden paths") {
    RunOverrides overrides;
    overrides.paths = 2000;
    const ExperimentOutput out =
        run_config_text(R"({"preset":"martingale_two_atoms"})", overrides);
    CHECK(out.kind == "martingale");
    REQUIRE(out.tables.size() == 2);  // martingale.csv + checks.csv
    CHECK(out.tables.front().filename == "martingale.csv");
    CHECK(out.tables.back().filename == "checks.csv");
    CHECK(out.tables.front().rows.size() == 2);  // two probe times
    CHECK(out.all_passed());
}

TEST_CASE("seed override changes the draw, repetition does not") {
    RunOverrides base;
    base.paths = 1000;
    const std::string cfg = R"({"preset":"compensator_two_atoms"})";
    const std::string a = serialize_all(run_config_text(cfg, base));
    const std::string b = serialize_all(run_config_text(cfg, base));
    CHECK(a == b);

    RunOverrides reseeded = base;
    reseeded.seed = 777;
    CHECK(serialize_all(run_config_text(cfg, reseeded)) != a);
}

TEST_CASE("file fields override the preset base") {
    const ExperimentOutput out = run_config_text(
        R"({"preset":"qv_shrinking_theta0","paths":500,"n_values":[1,2,4]})");
    const CsvTable& table = out.tables.front();
    CHECK(table.filename == "convergence.csv");
    CHECK(table.rows.size() == 3);
}

TEST_CASE("finite duality experiment reports clean axioms") {
    const ExperimentOutput out = run_config_text(
        R"({"preset":"entropic_2pt","densities":3,"axiom_trials":50})");
    CHECK(out.all_passed());
    bool saw_axiom = false;
    for (const CheckLine& c : out.checks)
        if (c.name.rfind("axiom_", 0) == 0) {
            saw_axiom = true;
            CHECK(c.value == 0.0);
        }
    CHECK(saw_axiom);
}

TEST_CASE("risk experiment honours an expect block") {
    const ExperimentOutput out = run_config_text(R"({
        "preset": "entropic_brownian_risk",
        "paths": 4000,
        "expect": {"value": 0.125, "value_tol": 2e-3,
                   "theta0": -0.5, "theta0_tol": 0.05}
    })");
    CHECK(out.all_passed());
    bool saw_value = false;
    for (const CheckLine& c : out.checks)
        if (c.name == "risk_value_error") saw_value = true;
    CHECK(saw_value);
}

TEST_CASE("penalty experiment compares the two routes") {
    const ExperimentOutput out = run_config_text(R"({
        "kind": "penalty", "seed": 9, "model": "two_atoms",
        "steps": 32, "paths": 4000, "spec": "entropic",
        "thetas": [{"theta0": 0.5, "theta1": 0.2},
                   {"type": "linear_in_time", "a0": 0.3, "b0": -0.2, "a1": 0.1}]
    })");
    CHECK(out.all_passed());
    CHECK(out.tables.front().rows.size() == 2);
}

TEST_CASE("preset listing names every experiment and flags bad files") {
    const std::string text = describe_presets({"/no/such/file.json"});
    for (const char* name :
         {"worst_case_3pt", "entropic_2pt", "martingale_two_atoms",
          "compensator_two_atoms", "qv_shrinking_theta0",
          "entropic_brownian_risk", "convexity_entropic", "minimality_brownian"})
        CHECK(text.find(name) != std::string::npos);
    CHECK(text.find("invalid") != std::string::npos);
}

TEST_CASE("tables land on disk") {
    namespace fs = std::filesystem;
    const ExperimentOutput out = run_config_text(
        R"({"preset":"entropic_2pt","densities":2,"axiom_trials":20})");
    const std::string dir = "experiment_io_test";
    write_tables(out, dir);
    CHECK(fs::exists(fs::path(dir) / "duality.csv"));
    CHECK(fs::exists(fs::path(dir) / "checks.csv"));
    fs::remove_all(dir);
}
