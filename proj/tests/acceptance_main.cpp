// Acceptance battery: one line per criterion, tolerances pinned below.
// argv[1] = path to the CLI binary (determinism criterion), argv[2] = scratch
// directory. Exit 0 iff every criterion passes.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "minpen/convergence.hpp"
#include "minpen/finite_duality.hpp"
#include "minpen/finite_penalty.hpp"
#include "minpen/penalty.hpp"

using namespace minpen;
namespace fs = std::filesystem;

namespace {

bool g_all_pass = true;

void report(const char* tag, bool pass, const std::string& detail) {
    g_all_pass = g_all_pass && pass;
    std::printf("%-34s %s  %s\n", tag, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

template <typename Body>
void criterion(const char* tag, Body&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(tag, false, std::string("exception: ") + e.what());
    }
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

std::vector<DensityVector> random_densities(const FiniteSpace& space, int count,
                                            std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::exponential_distribution<double> draw(1.0);
    std::vector<DensityVector> out;
    for (int d = 0; d < count; ++d) {
        std::vector<double> probs(space.size(), 0.0);
        double total = 0.0;
        for (std::size_t i : space.support()) total += probs[i] = draw(gen);
        for (std::size_t i : space.support()) probs[i] /= total;
        out.push_back(DensityVector::from_probabilities(space, probs));
    }
    return out;
}

int run_command(const std::string& command) {
    const int rc = std::system(command.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const LevyTriplet kTwoAtoms(0.0, true, {{-0.5, 1.0}, {1.0, 0.5}});
const LevyTriplet kBrownian(0.0, true, {});

// C1: the grid-and-polish biconjugate recovers the entropic penalty on the
// interior of the 4-atom simplex.
void c1_biconjugate() {
    const auto t0 = std::chrono::steady_clock::now();
    const FiniteSpace space = FiniteSpace::uniform(4);
    const FinitePenalty psi = entropic_penalty(space, 1.0);
    double max_gap = 0.0;
    int count = 0, boundary = 0;
    for (int k1 = 1; k1 <= 4; ++k1)
        for (int k2 = 1; k2 + k1 <= 5; ++k2)
            for (int k3 = 1; k3 + k2 + k1 <= 6; ++k3) {
                const int k4 = 7 - k1 - k2 - k3;
                const DensityVector q = DensityVector::from_probabilities(
                    space, {k1 / 7.0, k2 / 7.0, k3 / 7.0, k4 / 7.0});
                const BiconjugateResult r = fenchel_biconjugate(space, psi, q);
                max_gap = std::max(max_gap, std::fabs(r.value - psi(q)));
                boundary += r.boundary_hit ? 1 : 0;
                ++count;
            }
    const double dt = elapsed(t0);
    const bool pass =
        count == 20 && boundary == 0 && max_gap <= 1e-4 && dt < 60.0;
    report("C1 biconjugate_recovery", pass,
           fmt("max |Psi** - psi| = %.3g over %d interior densities "
               "(tol 1e-4), %.1fs (limit 60s)",
               max_gap, count, dt));
}

// C2: sampled biduality values never exceed the penalty they come from.
void c2_minimal_penalty_bound() {
    const FiniteSpace space = FiniteSpace::uniform(3);
    struct Pair {
        const char* name;
        FinitePenalty psi;
        RiskEvaluator rho;
    };
    const std::vector<double> costs{0.1, 0.2, 0.3};
    const std::vector<Pair> pairs{
        {"zero", zero_penalty(), worst_case_risk(space)},
        {"entropic", entropic_penalty(space, 1.0), entropic_risk(space, 1.0)},
        {"linear", linear_penalty(space, costs), linear_shift_risk(space, costs)}};
    double worst = -infinity;
    for (const Pair& pair : pairs)
        for (const DensityVector& q : random_densities(space, 10, 1201))
            worst = std::max(worst,
                             minimal_penalty(space, pair.rho, q).value - pair.psi(q));
    report("C2 minimal_penalty_upper_bound", worst <= 1e-6,
           fmt("max psi_hat - psi = %.3g over 3 penalties x 10 densities "
               "(tol 1e-6)",
               worst));
}

// C3: the worst-case risk has a vanishing minimal penalty on every measure.
void c3_worst_case_zero() {
    const FiniteSpace space({"a", "b", "c"}, {0.5, 0.3, 0.2});
    const RiskEvaluator rho = worst_case_risk(space);
    double worst = 0.0;
    for (const DensityVector& q : random_densities(space, 10, 1301))
        worst = std::max(worst, std::fabs(minimal_penalty(space, rho, q).value));
    report("C3 worst_case_penalty_zero", worst <= 1e-6,
           fmt("max |psi_hat| = %.3g over 10 densities (tol 1e-6)", worst));
}

// C4: the density terminal is a mean-one martingale estimate.
void c4_martingale() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto theta = GirsanovCoefficients::constant(0.5, 0.2, kTwoAtoms, 1.0);
    const MonteCarloEstimate est =
        martingale_check(kTwoAtoms, theta, 1.0, 32, 100000, {4201, 0});
    const double dt = elapsed(t0);
    const double err = std::fabs(est.mean - 1.0);
    const bool pass = err <= 3.0 * est.se && dt < 120.0;
    report("C4 density_martingale", pass,
           fmt("E[D_1] = %.5f, |err| = %.2e <= 3 se = %.2e, 1e5 paths, "
               "%.1fs (limit 120s)",
               est.mean, err, 3.0 * est.se, dt));
}

// C5: reweighted jump intensity matches (1 + theta1) * rate.
void c5_compensator() {
    const auto theta = GirsanovCoefficients::constant(0.5, 0.2, kTwoAtoms, 1.0);
    const CompensatorCheck check =
        compensator_check(kTwoAtoms, theta, 1, 32, 100000, {4202, 0});
    const double err = std::fabs(check.empirical - check.target);
    const bool pass = std::fabs(check.target - 0.6) <= 1e-12 &&
                      err <= 3.0 * check.se;
    report("C5 tilted_compensator", pass,
           fmt("atom (1.0, 0.5): empirical %.5f vs target %.5f, err %.2e <= "
               "3 se = %.2e",
               check.empirical, check.target, err, 3.0 * check.se));
}

// C6: the induced risk of X = 0.5 W_1 under the entropic penalty.
void c6_risk_value() {
    RiskProblem problem{kBrownian,
                        1.0,
                        64,
                        PathFunctional::scaled_brownian(0.5),
                        PenaltySpec::entropic(),
                        ThetaFamily{}};
    const RiskResult r = risk_measure(problem, 4000, 40000, {4203, 0});
    const double value_tol = std::max(3.0 * r.se, 2e-3);
    const double value_err = std::fabs(r.value - 0.125);
    const double theta_err = std::fabs(r.theta0 - (-0.5));
    const bool pass = value_err <= value_tol && theta_err <= 0.05 && !r.boundary;
    report("C6 entropic_risk_of_half_brownian", pass,
           fmt("rho = %.5f (target 0.125, err %.2e <= %.2e), theta0* = %.3f "
               "(target -0.5 +- 0.05)",
               r.value, value_err, value_tol, r.theta0));
}

// C7: L1 and quadratic-variation decay for theta0 = 1/n. The exceedance
// column saturates at 1 for small n (QV ~ theta0^2 E int D^2 dt far above
// epsilon), so the head holds flat and the tail must fall.
void c7_convergence() {
    ConvergenceExperiment experiment{
        kBrownian,
        1.0,
        256,
        GirsanovCoefficients::constant(0.0, 0.0, kBrownian, 1.0),
        [](int n) {
            return GirsanovCoefficients::constant(1.0 / n, 0.0, kBrownian, 1.0);
        },
        {1, 2, 4, 8, 16, 32},
        0.01,
        10000,
        RngStream{4204, 0}};
    const ConvergenceTable table = run_convergence(experiment);

    bool l1_strict = true, p_nonincreasing = true, p_has_drop = false;
    std::string l1_col, p_col;
    for (std::size_t m = 0; m < table.rows.size(); ++m) {
        l1_col += fmt("%s%.4f", m ? "," : "", table.rows[m].l1_mean);
        p_col += fmt("%s%.4f", m ? "," : "", table.rows[m].qv_exceedance);
        if (m == 0) continue;
        l1_strict = l1_strict &&
                    table.rows[m].l1_mean < table.rows[m - 1].l1_mean;
        const double dp =
            table.rows[m].qv_exceedance - table.rows[m - 1].qv_exceedance;
        p_nonincreasing = p_nonincreasing && dp <= 1e-12;
        p_has_drop = p_has_drop || dp < -1e-12;
    }
    const double final_p = table.rows.back().qv_exceedance;
    const bool pass =
        l1_strict && p_nonincreasing && p_has_drop && final_p < 0.05;
    report("C7 shrinking_tilt_convergence", pass,
           fmt("L1 = (%s) strictly down; P(QV > 0.01) = (%s) flat-then-down, "
               "final %.4f < 0.05",
               l1_col.c_str(), p_col.c_str(), final_p));
}

// C8: mixture-coefficient convexity over random coefficient pairs.
void c8_convexity() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 gen(4205);
    std::uniform_real_distribution<double> brownian_tilt(-1.0, 1.0);
    std::uniform_real_distribution<double> jump_tilt(-0.9, 2.0);
    std::uniform_real_distribution<double> mix(0.05, 0.95);
    const PenaltySpec spec = PenaltySpec::entropic();
    int passed = 0;
    double worst_z = infinity;
    for (int trial = 0; trial < 50; ++trial) {
        const auto ta = GirsanovCoefficients::constant(
            brownian_tilt(gen), jump_tilt(gen), kTwoAtoms, 1.0);
        const auto tb = GirsanovCoefficients::constant(
            brownian_tilt(gen), jump_tilt(gen), kTwoAtoms, 1.0);
        const ConvexityReport r =
            convexity_evidence(spec, kTwoAtoms, 1.0, 64, ta, tb, mix(gen), 8000,
                               RngStream{4206, static_cast<std::uint64_t>(trial) * 8000});
        passed += r.pass ? 1 : 0;
        if (r.se > 0.0) worst_z = std::min(worst_z, r.margin / r.se);
    }
    const double dt = elapsed(t0);
    report("C8 mixture_convexity", passed >= 48,
           fmt("%d/50 trials with margin >= -3 se (need >= 48), worst z = "
               "%.2f, %.1fs",
               passed, worst_z, dt));
}

// C9: axiom battery against the closed-form risk evaluators.
void c9_axioms() {
    const FiniteSpace space({"w0", "w1", "w2", "w3"}, {0.4, 0.3, 0.2, 0.1});
    const AxiomReport entropic =
        check_axioms(space, entropic_risk(space, 1.0), 1000, 4207);
    const AxiomReport worst =
        check_axioms(space, worst_case_risk(space), 1000, 4208);
    const std::size_t violations =
        entropic.violations.size() + worst.violations.size();
    report("C9 risk_axioms", violations == 0,
           fmt("%zu violations over 2 evaluators x 1000 trials x 3 axioms "
               "(tol 1e-9)",
               violations));
}

// C10: the CLI reruns every experiment kind byte-identically.
void c10_cli_determinism(const std::string& cli, const fs::path& work) {
    const std::vector<std::string> presets{
        "worst_case_3pt",        "entropic_2pt",    "martingale_two_atoms",
        "compensator_two_atoms", "qv_shrinking_theta0", "entropic_brownian_risk",
        "convexity_entropic",    "minimality_brownian"};
    fs::create_directories(work);
    int bad_exit = 0, mismatched = 0, compared = 0;
    for (const std::string& preset : presets) {
        const fs::path cfg = work / (preset + ".json");
        std::ofstream(cfg) << "{\"preset\":\"" << preset << "\"}\n";
        const fs::path dir_a = work / (preset + "_a");
        const fs::path dir_b = work / (preset + "_b");
        for (const fs::path& dir : {dir_a, dir_b}) {
            const int rc = run_command("'" + cli + "' run --config '" +
                                       cfg.string() + "' --paths 2000 --out '" +
                                       dir.string() + "' --quiet");
            if (rc != 0) ++bad_exit;
        }
        for (const fs::directory_entry& entry : fs::directory_iterator(dir_a)) {
            ++compared;
            if (slurp(entry.path()) != slurp(dir_b / entry.path().filename()) ||
                slurp(entry.path()).empty())
                ++mismatched;
        }
    }
    const int list_rc = run_command("'" + cli + "' list-presets > '" +
                                    (work / "presets.txt").string() + "'");
    const bool pass =
        bad_exit == 0 && mismatched == 0 && compared >= 16 && list_rc == 0;
    report("C10 cli_determinism", pass,
           fmt("8 presets x 2 runs: %d nonzero exits, %d/%d csv mismatches, "
               "list-presets rc %d",
               bad_exit, mismatched, compared, list_rc));
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const fs::path work = argc > 2 ? argv[2] : "acceptance_work";

    criterion("C1 biconjugate_recovery", c1_biconjugate);
    criterion("C2 minimal_penalty_upper_bound", c2_minimal_penalty_bound);
    criterion("C3 worst_case_penalty_zero", c3_worst_case_zero);
    criterion("C4 density_martingale", c4_martingale);
    criterion("C5 tilted_compensator", c5_compensator);
    criterion("C6 entropic_risk_of_half_brownian", c6_risk_value);
    criterion("C7 shrinking_tilt_convergence", c7_convergence);
    criterion("C8 mixture_convexity", c8_convexity);
    criterion("C9 risk_axioms", c9_axioms);
    if (cli.empty()) {
        report("C10 cli_determinism", false, "no CLI path on the command line");
    } else {
        criterion("C10 cli_determinism",
                  [&] { c10_cli_determinism(cli, work); });
    }

    std::printf("%s\n", g_all_pass ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
    return g_all_pass ? 0 : 1;
}
