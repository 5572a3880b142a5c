#include "minpen/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"

#include "minpen/convergence.hpp"
#include "minpen/finite_duality.hpp"
#include "minpen/finite_penalty.hpp"
#include "minpen/penalty.hpp"

namespace minpen {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

const json& need(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing field '") + key + "'");
    return *it;
}

double as_num(const json& v, const char* key) {
    if (!v.is_number()) fail(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

double need_num(const json& j, const char* key) { return as_num(need(j, key), key); }

double opt_num(const json& j, const char* key, double fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : as_num(*it, key);
}

int opt_int(const json& j, const char* key, int fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer())
        fail(std::string("field '") + key + "' must be an integer");
    return it->get<int>();
}

bool opt_bool(const json& j, const char* key, bool fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) fail(std::string("field '") + key + "' must be a bool");
    return it->get<bool>();
}

std::uint64_t need_seed(const json& j) {
    const json& v = need(j, "seed");
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        fail("field 'seed' must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::vector<double> num_list(const json& v, const char* key) {
    if (!v.is_array() || v.empty())
        fail(std::string("field '") + key + "' must be a nonempty array");
    std::vector<double> out;
    for (const json& e : v) out.push_back(as_num(e, key));
    return out;
}

// ---- component registries ------------------------------------------------

LevyTriplet model_preset(const std::string& name) {
    if (name == "brownian") return LevyTriplet(0.0, true, {});
    if (name == "two_atoms")
        return LevyTriplet(0.0, true, {{-0.5, 1.0}, {1.0, 0.5}});
    if (name == "single_atom") return LevyTriplet(0.0, true, {{1.0, 2.0}});
    if (name == "jump_only")
        return LevyTriplet(0.0, false, {{-0.5, 1.0}, {1.0, 0.5}});
    fail("unknown model preset '" + name + "'");
}

LevyTriplet parse_model(const json& j) {
    if (j.is_string()) return model_preset(j.get<std::string>());
    if (!j.is_object()) fail("'model' must be a preset name or an object");
    std::vector<JumpAtom> atoms;
    if (auto it = j.find("atoms"); it != j.end()) {
        if (!it->is_array()) fail("'model.atoms' must be an array");
        for (const json& a : *it)
            atoms.push_back({need_num(a, "size"), need_num(a, "rate")});
    }
    LevyTriplet model(opt_num(j, "drift", 0.0), opt_bool(j, "brownian", true),
                      std::move(atoms));
    return model;
}

FiniteSpace parse_space(const json& j) {
    if (!j.is_object()) fail("'space' must be an object");
    if (auto it = j.find("uniform"); it != j.end()) {
        if (!it->is_number_integer() || it->get<int>() < 1)
            fail("'space.uniform' must be a positive integer");
        return FiniteSpace::uniform(it->get<std::size_t>());
    }
    std::vector<double> weights = num_list(need(j, "weights"), "space.weights");
    std::vector<std::string> labels;
    if (auto it = j.find("labels"); it != j.end()) {
        if (!it->is_array()) fail("'space.labels' must be an array");
        for (const json& s : *it) {
            if (!s.is_string()) fail("'space.labels' must hold strings");
            labels.push_back(s.get<std::string>());
        }
    } else {
        for (std::size_t i = 0; i < weights.size(); ++i)
            labels.push_back("w" + std::to_string(i));
    }
    return FiniteSpace(std::move(labels), std::move(weights));
}

FinitePenalty parse_finite_penalty(const json& j, const FiniteSpace& space) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "zero") return zero_penalty();
        if (s == "worst_case") return worst_case_penalty();
        if (s.rfind("entropic:", 0) == 0)
            return entropic_penalty(space, std::strtod(s.c_str() + 9, nullptr));
        if (s.rfind("linear:", 0) == 0) {
            const double c = std::strtod(s.c_str() + 7, nullptr);
            return linear_penalty(space, std::vector<double>(space.size(), c));
        }
        fail("unknown penalty '" + s + "'");
    }
    if (j.is_object()) {
        const std::string type = need(j, "type").get<std::string>();
        if (type == "entropic")
            return entropic_penalty(space, need_num(j, "gamma"));
        if (type == "linear")
            return linear_penalty(space, num_list(need(j, "costs"), "costs"));
        fail("unknown penalty type '" + type + "'");
    }
    fail("'penalty' must be a name or an object");
}

GirsanovCoefficients parse_theta(const json& j, const LevyTriplet& model,
                                 double horizon) {
    if (!j.is_object()) fail("theta must be an object");
    const std::string type = j.value("type", "constant");
    try {
        if (type == "constant")
            return GirsanovCoefficients::constant(opt_num(j, "theta0", 0.0),
                                                  opt_num(j, "theta1", 0.0), model,
                                                  horizon);
        if (type == "linear_in_time")
            return GirsanovCoefficients::linear_in_time(
                opt_num(j, "a0", 0.0), opt_num(j, "b0", 0.0), opt_num(j, "a1", 0.0),
                opt_num(j, "b1", 0.0), model, horizon);
        if (type == "per_atom") {
            std::vector<double> tilt = num_list(need(j, "theta1"), "theta1");
            return GirsanovCoefficients::per_atom(opt_num(j, "theta0", 0.0),
                                                  std::move(tilt), model, horizon);
        }
    } catch (const std::invalid_argument& e) {
        fail(std::string("bad theta: ") + e.what());
    }
    fail("unknown theta type '" + type + "'");
}

std::string theta_label(const json& j) {
    if (auto it = j.find("name"); it != j.end() && it->is_string())
        return it->get<std::string>();
    const std::string type = j.value("type", "constant");
    std::ostringstream out;
    if (type == "constant")
        out << "const(" << j.value("theta0", 0.0) << "," << j.value("theta1", 0.0)
            << ")";
    else
        out << type;
    return out.str();
}

PenaltySpec parse_spec(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "entropic") return PenaltySpec::entropic();
        if (s == "quadratic") return PenaltySpec::quadratic();
        fail("unknown penalty spec '" + s + "'");
    }
    if (j.is_object() && j.value("type", "") == "custom") {
        auto knots = [&](const char* key) {
            const json& arr = need(j, key);
            if (!arr.is_array()) fail(std::string("'") + key + "' must be an array");
            std::vector<std::pair<double, double>> out;
            for (const json& k : arr) {
                if (!k.is_array() || k.size() != 2)
                    fail(std::string("'") + key + "' entries must be [x, y] pairs");
                out.emplace_back(as_num(k[0], key), as_num(k[1], key));
            }
            return out;
        };
        try {
            return PenaltySpec::custom(knots("h"), knots("h0"), knots("h1"),
                                       opt_num(j, "delta", 1.0),
                                       j.value("name", "custom"));
        } catch (const std::invalid_argument& e) {
            fail(std::string("bad custom spec: ") + e.what());
        }
    }
    fail("'spec' must be 'entropic', 'quadratic', or a custom object");
}

PathFunctional parse_position(const json& j) {
    if (!j.is_object()) fail("'position' must be an object");
    const std::string type = need(j, "type").get<std::string>();
    const double clip = opt_num(j, "clip", 8.0);
    if (!(clip > 0.0)) fail("'position.clip' must be positive");
    if (type == "scaled_brownian")
        return PathFunctional::scaled_brownian(opt_num(j, "scale", 1.0), clip);
    if (type == "scaled_level")
        return PathFunctional::scaled_level(opt_num(j, "scale", 1.0), clip);
    if (type == "constant")
        return PathFunctional::constant(opt_num(j, "value", 0.0), clip);
    fail("unknown position type '" + type + "'");
}

ThetaFamily parse_family(const json& cfg) {
    ThetaFamily family;
    auto it = cfg.find("family");
    if (it == cfg.end()) return family;
    const json& j = *it;
    if (!j.is_object()) fail("'family' must be an object");
    auto axis = [&](const char* key, double& lo, double& hi, int& n) {
        auto a = j.find(key);
        if (a == j.end()) return;
        if (!a->is_array() || a->size() != 3)
            fail(std::string("'family.") + key + "' must be [lo, hi, points]");
        lo = as_num((*a)[0], key);
        hi = as_num((*a)[1], key);
        if (!(*a)[2].is_number_integer() || (*a)[2].get<int>() < 1)
            fail(std::string("'family.") + key + "' points must be >= 1");
        n = (*a)[2].get<int>();
        if (!(hi >= lo)) fail(std::string("'family.") + key + "' has lo > hi");
    };
    axis("theta0", family.theta0_lo, family.theta0_hi, family.theta0_points);
    axis("theta1", family.theta1_lo, family.theta1_hi, family.theta1_points);
    return family;
}

std::size_t parse_paths(const json& cfg, std::size_t fallback) {
    auto it = cfg.find("paths");
    if (it == cfg.end()) return fallback;
    if (!it->is_number_integer() || it->get<std::int64_t>() < 2)
        fail("'paths' must be an integer >= 2");
    return it->get<std::size_t>();
}

// ---- experiment presets --------------------------------------------------

const std::map<std::string, json>& experiment_presets() {
    static const std::map<std::string, json> presets = [] {
        std::map<std::string, json> m;
        m["worst_case_3pt"] = json{
            {"kind", "finite-duality"}, {"seed", 4101},
            {"space", {{"uniform", 3}}}, {"penalty", "worst_case"},
            {"densities", 10},           {"tolerance", 1e-6}};
        m["entropic_2pt"] = json{
            {"kind", "finite-duality"}, {"seed", 4102},
            {"space", {{"uniform", 2}}}, {"penalty", "entropic:1.0"},
            {"densities", 10},           {"tolerance", 1e-6}};
        m["martingale_two_atoms"] = json{
            {"kind", "martingale"},
            {"seed", 4103},
            {"model", "two_atoms"},
            {"horizon", 1.0},
            {"steps", 32},
            {"paths", 20000},
            {"theta", {{"theta0", 0.5}, {"theta1", 0.2}}},
            {"times", {0.5, 1.0}}};
        m["compensator_two_atoms"] = json{
            {"kind", "compensator"},
            {"seed", 4104},
            {"model", "two_atoms"},
            {"horizon", 1.0},
            {"steps", 32},
            {"paths", 20000},
            {"theta", {{"theta0", 0.5}, {"theta1", 0.2}}}};
        m["qv_shrinking_theta0"] = json{
            {"kind", "qv-convergence"},
            {"seed", 4105},
            {"model", "brownian"},
            {"horizon", 1.0},
            {"steps", 256},
            {"paths", 10000},
            {"epsilon", 0.01},
            {"n_values", {1, 2, 4, 8, 16, 32}},
            {"sequence", {{"theta0_scale", 1.0}, {"theta1_scale", 0.0}}}};
        m["entropic_brownian_risk"] = json{
            {"kind", "risk"},
            {"seed", 4106},
            {"model", "brownian"},
            {"horizon", 1.0},
            {"steps", 64},
            {"paths", 20000},
            {"spec", "entropic"},
            {"position", {{"type", "scaled_brownian"}, {"scale", 0.5}}},
            {"budget", 4000}};
        m["convexity_entropic"] = json{
            {"kind", "convexity"},
            {"seed", 4107},
            {"model", "two_atoms"},
            {"horizon", 1.0},
            {"steps", 128},
            {"paths", 20000},
            {"spec", "entropic"},
            {"theta_a", {{"theta0", 0.6}, {"theta1", 0.3}}},
            {"theta_b", {{"theta0", -0.4}, {"theta1", 0.8}}},
            {"lambdas", {0.0, 0.25, 0.5, 0.75, 1.0}}};
        m["minimality_brownian"] = json{
            {"kind", "minimality"},
            {"seed", 4108},
            {"model", "brownian"},
            {"horizon", 1.0},
            {"steps", 32},
            {"paths", 5000},
            {"spec", "entropic"},
            {"position", {{"type", "scaled_brownian"}, {"scale", 1.0}}},
            {"q_thetas", {{0.3, 0.0}, {-0.5, 0.0}}},
            {"scale_bound", 2.0},
            {"scale_levels", 4},
            {"budget", 40}};
        return m;
    }();
    return presets;
}

json merge_with_preset(json cfg) {
    auto it = cfg.find("preset");
    if (it == cfg.end()) return cfg;
    if (!it->is_string()) fail("'preset' must be a string");
    const std::string name = it->get<std::string>();
    const auto& presets = experiment_presets();
    auto p = presets.find(name);
    if (p == presets.end()) fail("unknown preset '" + name + "'");
    json merged = p->second;
    for (auto& [key, value] : cfg.items())
        if (key != "preset") merged[key] = value;
    return merged;
}

// ---- runners -------------------------------------------------------------

void add_check(ExperimentOutput& out, std::string name, double value,
               double threshold, bool passed) {
    out.checks.push_back({std::move(name), value, threshold, passed});
}

ExperimentOutput run_finite_duality(const json& cfg) {
    ExperimentOutput out;
    out.kind = "finite-duality";
    const std::uint64_t seed = need_seed(cfg);
    const FiniteSpace space = parse_space(need(cfg, "space"));
    const FinitePenalty penalty = parse_finite_penalty(need(cfg, "penalty"), space);
    SimplexSearchOptions search;
    search.resolution = opt_int(cfg, "resolution", 24);
    search.refine = opt_bool(cfg, "refine", true);
    const int n_densities = opt_int(cfg, "densities", 10);
    if (n_densities < 1) fail("'densities' must be >= 1");
    const double tolerance = opt_num(cfg, "tolerance", 1e-6);

    const RiskEvaluator rho = penalty_risk_evaluator(space, penalty, search);

    PositionSamplingPlan plan;
    plan.bound = opt_num(cfg, "position_bound", 4.0);
    plan.resolution = opt_int(cfg, "position_resolution", 5);
    plan.levels = opt_int(cfg, "position_levels", 10);

    CsvTable duality{"duality.csv",
                     {"density", "psi", "psi_hat", "gap", "converged"},
                     {}};
    CsvTable densities{"densities.csv",
                       {"density", "atom", "label", "probability"},
                       {}};

    std::mt19937_64 gen(seed);
    std::exponential_distribution<double> draw(1.0);
    double max_gap = -infinity;
    for (int d = 0; d < n_densities; ++d) {
        std::vector<double> probs(space.size(), 0.0);
        double total = 0.0;
        for (std::size_t i : space.support()) total += probs[i] = draw(gen);
        for (std::size_t i : space.support()) probs[i] /= total;
        const DensityVector q = DensityVector::from_probabilities(space, probs);

        const double psi = penalty(q);
        const MinimalPenaltyResult mp = minimal_penalty(space, rho, q, plan);
        const double gap = mp.value - psi;
        max_gap = std::max(max_gap, gap);
        duality.add_row({std::to_string(d), format_double(psi),
                         format_double(mp.value), format_double(gap),
                         mp.converged ? "1" : "0"});
        for (std::size_t i = 0; i < space.size(); ++i)
            densities.add_row({std::to_string(d), std::to_string(i),
                               space.labels()[i], format_double(probs[i])});
    }

    const AxiomReport axioms =
        check_axioms(space, rho, opt_int(cfg, "axiom_trials", 200), seed + 1);
    std::map<std::string, int> axiom_fails{
        {"monotonicity", 0}, {"translation_invariance", 0}, {"convexity", 0}};
    for (const AxiomViolation& v : axioms.violations) ++axiom_fails[v.axiom];

    out.tables.push_back(std::move(duality));
    out.tables.push_back(std::move(densities));
    add_check(out, "minimal_penalty_max_gap", max_gap, tolerance,
              max_gap <= tolerance);
    for (const auto& [axiom, count] : axiom_fails)
        add_check(out, "axiom_" + axiom + "_violations", count, 0.0, count == 0);
    return out;
}

ExperimentOutput run_martingale(const json& cfg) {
    ExperimentOutput out;
    out.kind = "martingale";
    const std::uint64_t seed = need_seed(cfg);
    const LevyTriplet model = parse_model(need(cfg, "model"));
    const double horizon = opt_num(cfg, "horizon", 1.0);
    const std::size_t steps = static_cast<std::size_t>(opt_int(cfg, "steps", 64));
    const std::size_t paths = parse_paths(cfg, 20000);
    const GirsanovCoefficients theta =
        parse_theta(need(cfg, "theta"), model, horizon);
    const double z_max = opt_num(cfg, "z_max", 3.0);
    std::vector<double> times{horizon};
    if (auto it = cfg.find("times"); it != cfg.end())
        times = num_list(*it, "times");

    CsvTable table{"martingale.csv", {"t", "mean", "se", "z"}, {}};
    double worst_z = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const MonteCarloEstimate est = martingale_check(
            model, theta, times[j], steps, paths, RngStream{seed, j * paths});
        const double z = std::fabs(est.mean - 1.0) / est.se;
        worst_z = std::max(worst_z, z);
        table.add_row({format_double(times[j]), format_double(est.mean),
                       format_double(est.se), format_double(z)});
    }
    out.tables.push_back(std::move(table));
    add_check(out, "martingale_max_z", worst_z, z_max, worst_z <= z_max);
    return out;
}

ExperimentOutput run_compensator(const json& cfg) {
    ExperimentOutput out;
    out.kind = "compensator";
    const std::uint64_t seed = need_seed(cfg);
    const LevyTriplet model = parse_model(need(cfg, "model"));
    if (model.atoms().empty()) fail("compensator experiment needs jump atoms");
    const double horizon = opt_num(cfg, "horizon", 1.0);
    const std::size_t steps = static_cast<std::size_t>(opt_int(cfg, "steps", 64));
    const std::size_t paths = parse_paths(cfg, 20000);
    const GirsanovCoefficients theta =
        parse_theta(need(cfg, "theta"), model, horizon);
    const double z_max = opt_num(cfg, "z_max", 3.0);

    CsvTable table{"compensator.csv",
                   {"atom", "size", "rate", "empirical", "target", "se", "z"},
                   {}};
    double worst_z = 0.0;
    for (std::size_t i = 0; i < model.atoms().size(); ++i) {
        const CompensatorCheck check = compensator_check(
            model, theta, i, steps, paths, RngStream{seed, i * paths});
        const double z = std::fabs(check.empirical - check.target) / check.se;
        worst_z = std::max(worst_z, z);
        table.add_row({std::to_string(i), format_double(model.atoms()[i].size),
                       format_double(model.atoms()[i].rate),
                       format_double(check.empirical), format_double(check.target),
                       format_double(check.se), format_double(z)});
    }
    out.tables.push_back(std::move(table));
    add_check(out, "compensator_max_z", worst_z, z_max, worst_z <= z_max);
    return out;
}

ExperimentOutput run_qv_convergence(const json& cfg) {
    ExperimentOutput out;
    out.kind = "qv-convergence";
    const std::uint64_t seed = need_seed(cfg);
    const LevyTriplet model = parse_model(need(cfg, "model"));
    const double horizon = opt_num(cfg, "horizon", 1.0);
    const std::size_t steps = static_cast<std::size_t>(opt_int(cfg, "steps", 256));
    const std::size_t paths = parse_paths(cfg, 10000);
    const double epsilon = opt_num(cfg, "epsilon", 0.01);
    const double final_bound = opt_num(cfg, "exceedance_final", 0.05);

    std::vector<int> n_values{1, 2, 4, 8, 16, 32};
    if (auto it = cfg.find("n_values"); it != cfg.end()) {
        n_values.clear();
        for (double v : num_list(*it, "n_values"))
            n_values.push_back(static_cast<int>(v));
    }
    const json seq = cfg.value("sequence", json::object());
    const double s0 = opt_num(seq, "theta0_scale", 1.0);
    const double s1 = opt_num(seq, "theta1_scale", 0.0);

    ConvergenceExperiment experiment{
        model,
        horizon,
        steps,
        GirsanovCoefficients::constant(0.0, 0.0, model, horizon),
        [s0, s1, &model, horizon](int n) {
            return GirsanovCoefficients::constant(s0 / n, s1 / n, model, horizon);
        },
        n_values,
        epsilon,
        paths,
        RngStream{seed, 0}};

    const double stop_level = opt_num(cfg, "stop_level", infinity);
    const ConvergenceTable table = is_finite(stop_level)
                                       ? stopped_variant(experiment, stop_level)
                                       : run_convergence(experiment);

    CsvTable csv{"convergence.csv",
                 {"n", "l1_mean", "l1_se", "qv_exceedance", "qv_se"},
                 {}};
    double max_l1_rise = -infinity, max_p_rise = -infinity, min_p_drop = infinity;
    for (std::size_t m = 0; m < table.rows.size(); ++m) {
        const ConvergenceRow& row = table.rows[m];
        csv.add_row({std::to_string(row.n), format_double(row.l1_mean),
                     format_double(row.l1_se), format_double(row.qv_exceedance),
                     format_double(row.qv_se)});
        if (m > 0) {
            max_l1_rise =
                std::max(max_l1_rise, row.l1_mean - table.rows[m - 1].l1_mean);
            const double dp = row.qv_exceedance - table.rows[m - 1].qv_exceedance;
            max_p_rise = std::max(max_p_rise, dp);
            min_p_drop = std::min(min_p_drop, dp);
        }
    }
    out.tables.push_back(std::move(csv));
    add_check(out, "l1_max_consecutive_rise", max_l1_rise, 0.0, max_l1_rise < 0.0);
    add_check(out, "exceedance_max_consecutive_rise", max_p_rise, 1e-12,
              max_p_rise <= 1e-12);
    add_check(out, "exceedance_min_consecutive_drop", min_p_drop, 0.0,
              min_p_drop < 0.0);
    const double final_p = table.rows.back().qv_exceedance;
    add_check(out, "exceedance_final", final_p, final_bound,
              final_p < final_bound);
    return out;
}

ExperimentOutput run_penalty(const json& cfg) {
    ExperimentOutput out;
    out.kind = "penalty";
    const std::uint64_t seed = need_seed(cfg);
    const LevyTriplet model = parse_model(need(cfg, "model"));
    const double horizon = opt_num(cfg, "horizon", 1.0);
    const std::size_t steps = static_cast<std::size_t>(opt_int(cfg, "steps", 64));
    const std::size_t paths = parse_paths(cfg, 20000);
    const PenaltySpec spec = parse_spec(need(cfg, "spec"));
    const double z_max = opt_num(cfg, "z_max", 3.0);
    const json& thetas = need(cfg, "thetas");
    if (!thetas.is_array() || thetas.empty())
        fail("'thetas' must be a nonempty array");

    CsvTable table{"penalty.csv",
                   {"theta", "quadrature", "mc_mean", "mc_se", "z"},
                   {}};
    double worst_z = 0.0;
    std::size_t index = 0;
    for (const json& tj : thetas) {
        const GirsanovCoefficients theta = parse_theta(tj, model, horizon);
        const double quad = penalty_quadrature(spec, theta, model, horizon);
        const MonteCarloEstimate mc = penalty_value(
            spec, theta, model, horizon, steps, paths, RngStream{seed, index * paths});
        double z;
        if (!is_finite(quad) || !is_finite(mc.mean)) {
            z = quad == mc.mean ? 0.0 : infinity;  // both routes may diverge
        } else {
            const double diff = std::fabs(mc.mean - quad);
            z = mc.se > 0.0 ? diff / mc.se : (diff <= 1e-10 ? 0.0 : infinity);
        }
        worst_z = std::max(worst_z, z);
        table.add_row({theta_label(tj), format_double(quad),
                       format_double(mc.mean), format_double(mc.se),
                       format_double(z)});
        ++index;
    }
    out.tables.push_back(std::move(table));
    add_check(out, "penalty_route_max_z", worst_z, z_max, worst_z <= z_max);
    return out;
}

ExperimentOutput run_risk(const json& cfg) {
    ExperimentOutput out;
    out.kind = "risk";
    const std::uint64_t seed = need_seed(cfg);
    RiskProblem problem{parse_model(need(cfg, "model")),
                        opt_num(cfg, "horizon", 1.0),
                        static_cast<std::size_t>(opt_int(cfg, "steps", 64)),
                        parse_position(need(cfg, "position")),
                        parse_spec(need(cfg, "spec")),
                        parse_family(cfg)};
    const std::size_t paths = parse_paths(cfg, 20000);
    const std::size_t budget = static_cast<std::size_t>(opt_int(cfg, "budget", 4000));

    const RiskResult result =
        risk_measure(problem, budget, paths, RngStream{seed, 0});

    CsvTable table{
        "risk.csv",
        {"value", "theta0", "theta1", "se", "boundary", "evaluations"},
        {}};
    table.add_row({format_double(result.value), format_double(result.theta0),
                   format_double(result.theta1), format_double(result.se),
                   result.boundary ? "1" : "0",
                   std::to_string(result.evaluations)});
    out.tables.push_back(std::move(table));
    add_check(out, "risk_finite", result.value, infinity, is_finite(result.value));
    add_check(out, "risk_interior_argmax", result.boundary ? 1.0 : 0.0, 0.0,
              !result.boundary);

    if (auto it = cfg.find("expect"); it != cfg.end()) {
        const json& expect = *it;
        const double z_max = opt_num(cfg, "z_max", 3.0);
        if (expect.contains("value")) {
            const double target = need_num(expect, "value");
            const double tol =
                std::max(opt_num(expect, "value_tol", 1e-3), z_max * result.se);
            const double err = std::fabs(result.value - target);
            add_check(out, "risk_value_error", err, tol, err <= tol);
        }
        if (expect.contains("theta0")) {
            const double err =
                std::fabs(result.theta0 - need_num(expect, "theta0"));
            const double tol = opt_num(expect, "theta0_tol", 0.05);
            add_check(out, "risk_theta0_error", err, tol, err <= tol);
        }
        if (expect.contains("theta1")) {
            const double err =
                std::fabs(result.theta1 - need_num(expect, "theta1"));
            const double tol = opt_num(expect, "theta1_tol", 0.05);
            add_check(out, "risk_theta1_error", err, tol, err <= tol);
        }
    }
    return out;
}

ExperimentOutput run_convexity(const json& cfg) {
    ExperimentOutput out;
    out.kind = "convexity";
    const std::uint64_t seed = need_seed(cfg);
    const LevyTriplet model = parse_model(need(cfg, "model"));
    const double horizon = opt_num(cfg, "horizon", 1.0);
    const std::size_t steps = static_cast<std::size_t>(opt_int(cfg, "steps", 128));
    const std::size_t paths = parse_paths(cfg, 20000);
    const PenaltySpec spec = parse_spec(need(cfg, "spec"));
    const GirsanovCoefficients theta_a =
        parse_theta(need(cfg, "theta_a"), model, horizon);
    const GirsanovCoefficients theta_b =
        parse_theta(need(cfg, "theta_b"), model, horizon);
    std::vector<double> lambdas{0.0, 0.25, 0.5, 0.75, 1.0};
    if (auto it = cfg.find("lambdas"); it != cfg.end())
        lambdas = num_list(*it, "lambdas");

    CsvTable table{
        "convexity.csv",
        {"lambda", "lhs", "rhs", "margin", "se", "degenerate", "pass"},
        {}};
    double min_z = infinity;
    bool all_pass = true;
    for (double lambda : lambdas) {
        // Same stream for every lambda: the comparison is paired by path.
        const ConvexityReport report =
            convexity_evidence(spec, model, horizon, steps, theta_a, theta_b,
                               lambda, paths, RngStream{seed, 0});
        const double z = report.se > 0.0 ? report.margin / report.se : 0.0;
        min_z = std::min(min_z, z);
        all_pass = all_pass && report.pass;
        table.add_row({format_double(report.lambda), format_double(report.lhs),
                       format_double(report.rhs), format_double(report.margin),
                       format_double(report.se),
                       std::to_string(report.degenerate_paths),
                       report.pass ? "1" : "0"});
    }
    out.tables.push_back(std::move(table));
    add_check(out, "convexity_min_margin_z", min_z, -3.0, all_pass);
    return out;
}

ExperimentOutput run_minimality(const json& cfg) {
    ExperimentOutput out;
    out.kind = "minimality";
    const std::uint64_t seed = need_seed(cfg);
    RiskProblem problem{parse_model(need(cfg, "model")),
                        opt_num(cfg, "horizon", 1.0),
                        static_cast<std::size_t>(opt_int(cfg, "steps", 32)),
                        parse_position(need(cfg, "position")),
                        parse_spec(need(cfg, "spec")),
                        parse_family(cfg)};
    const std::size_t paths = parse_paths(cfg, 5000);
    const json& qs = need(cfg, "q_thetas");
    if (!qs.is_array() || qs.empty()) fail("'q_thetas' must be a nonempty array");
    std::vector<std::pair<double, double>> q_thetas;
    for (const json& q : qs) {
        if (!q.is_array() || q.size() != 2)
            fail("'q_thetas' entries must be [theta0, theta1] pairs");
        q_thetas.emplace_back(as_num(q[0], "q_thetas"), as_num(q[1], "q_thetas"));
    }

    const MinimalityReport report = minimality_evidence(
        problem, q_thetas, opt_num(cfg, "scale_bound", 2.0),
        opt_int(cfg, "scale_levels", 4),
        static_cast<std::size_t>(opt_int(cfg, "budget", 40)), paths,
        RngStream{seed, 0}, opt_num(cfg, "tolerance", 1e-3));

    CsvTable table{"minimality.csv",
                   {"theta0", "theta1", "level", "rho_evaluations", "lower_bound",
                    "penalty", "gap", "se", "pass"},
                   {}};
    int fails = 0;
    for (const MinimalityRow& row : report.rows) {
        if (!row.pass) ++fails;
        table.add_row({format_double(row.theta0), format_double(row.theta1),
                       std::to_string(row.level),
                       std::to_string(row.rho_evaluations),
                       format_double(row.lower_bound), format_double(row.penalty),
                       format_double(row.gap), format_double(row.se),
                       row.pass ? "1" : "0"});
    }
    out.tables.push_back(std::move(table));
    add_check(out, "minimality_bound_failures", fails, 0.0, fails == 0);
    add_check(out, "minimality_gaps_nonincreasing",
              report.gaps_nonincreasing ? 1.0 : 0.0, 1.0,
              report.gaps_nonincreasing);
    return out;
}

ExperimentOutput dispatch(const json& cfg) {
    const json& kind = need(cfg, "kind");
    if (!kind.is_string()) fail("'kind' must be a string");
    const std::string k = kind.get<std::string>();
    try {
        if (k == "finite-duality") return run_finite_duality(cfg);
        if (k == "martingale") return run_martingale(cfg);
        if (k == "compensator") return run_compensator(cfg);
        if (k == "qv-convergence") return run_qv_convergence(cfg);
        if (k == "penalty") return run_penalty(cfg);
        if (k == "risk") return run_risk(cfg);
        if (k == "convexity") return run_convexity(cfg);
        if (k == "minimality") return run_minimality(cfg);
    } catch (const std::invalid_argument& e) {
        // Component constructors surface inconsistent inputs this way; they
        // are configuration mistakes, not runtime failures.
        fail(e.what());
    }
    fail("unknown experiment kind '" + k + "'");
}

json parse_object(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail("config is not valid JSON");
    if (!j.is_object()) fail("config must be a JSON object");
    return j;
}

void append_checks_table(ExperimentOutput& out) {
    CsvTable table{"checks.csv", {"check", "value", "threshold", "passed"}, {}};
    for (const CheckLine& c : out.checks)
        table.add_row({c.name, format_double(c.value), format_double(c.threshold),
                       c.passed ? "1" : "0"});
    out.tables.push_back(std::move(table));
}

}  // namespace

ExperimentOutput run_config_text(const std::string& text,
                                 const RunOverrides& overrides) {
    json cfg = merge_with_preset(parse_object(text));
    if (overrides.seed) cfg["seed"] = *overrides.seed;
    if (overrides.paths) cfg["paths"] = *overrides.paths;
    ExperimentOutput out = dispatch(cfg);
    append_checks_table(out);
    return out;
}

ExperimentOutput run_config_file(const std::string& path,
                                 const RunOverrides& overrides) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return run_config_text(text.str(), overrides);
}

void write_tables(const ExperimentOutput& output, const std::string& directory) {
    std::filesystem::create_directories(directory);
    for (const CsvTable& table : output.tables) {
        const std::filesystem::path path =
            std::filesystem::path(directory) / table.filename;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << table.serialize();
    }
}

std::string describe_presets(const std::vector<std::string>& user_files) {
    static const std::map<std::string, std::string> blurbs{
        {"worst_case_3pt",
         "uniform 3-atom space, worst-case penalty (zero on every measure), "
         "duality round trip"},
        {"entropic_2pt",
         "uniform 2-atom space, entropic penalty (1/gamma) E_P[Z log Z], "
         "duality round trip"},
        {"martingale_two_atoms",
         "E_P[D_t] = 1 under constant tilts of the Brownian + two-atom model"},
        {"compensator_two_atoms",
         "reweighted jump rates against (1 + theta1) * rate targets"},
        {"qv_shrinking_theta0",
         "L1 and quadratic-variation decay of D^n - 1 for theta0 = 1/n"},
        {"entropic_brownian_risk",
         "sup over constant tilts of E_Q[-X] minus the entropic penalty, "
         "X = 0.5 W_T"},
        {"convexity_entropic",
         "penalty of the lambda-mixture measure vs the mixed endpoint penalties"},
        {"minimality_brownian",
         "biduality lower bounds rising toward the penalty value"},
    };
    std::ostringstream out;
    out << "experiment presets:\n";
    for (const auto& [name, cfg] : experiment_presets())
        out << "  " << name << "  [" << cfg.at("kind").get<std::string>() << "]  "
            << blurbs.at(name) << "\n";
    out << "models: brownian, two_atoms, single_atom, jump_only\n";
    out << "finite penalties: zero, worst_case, entropic:<gamma>, linear:<cost>\n";
    out << "penalty specs: entropic, quadratic, custom (piecewise-linear knots)\n";
    out << "thetas: constant, linear_in_time, per_atom\n";
    for (const std::string& file : user_files) {
        out << "user config " << file << ": ";
        try {
            std::ifstream in(file);
            if (!in) fail("cannot open file");
            std::ostringstream text;
            text << in.rdbuf();
            json cfg = merge_with_preset(parse_object(text.str()));
            const std::string kind = need(cfg, "kind").get<std::string>();
            static const std::vector<std::string> kinds{
                "finite-duality", "martingale", "compensator", "qv-convergence",
                "penalty",        "risk",       "convexity",   "minimality"};
            if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
                fail("unknown experiment kind '" + kind + "'");
            need_seed(cfg);
            out << "ok  [" << kind << "]\n";
        } catch (const ConfigError& e) {
            out << "invalid (" << e.what() << ")\n";
        }
    }
    return out.str();
}

}  // namespace minpen
