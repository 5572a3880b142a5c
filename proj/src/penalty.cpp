#include "minpen/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

#include "minpen/quadrature.hpp"
#include "minpen/optimize.hpp"

namespace minpen {

namespace {

// Midpoint convexity spot-check on [lo, hi]. Infinite endpoints make the
// inequality vacuous; a NaN or an infinite midpoint between finite endpoints
// is a hard failure.
void check_convex(const std::function<double(double)>& f, double lo, double hi,
                  const char* label, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> pick(lo, hi);
    for (int k = 0; k < 1000; ++k) {
        const double a = pick(gen);
        const double b = pick(gen);
        const double fa = f(a), fb = f(b);
        if (std::isnan(fa) || std::isnan(fb))
            throw std::invalid_argument(std::string(label) + " returned NaN");
        if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
        const double fm = f(0.5 * (a + b));
        if (std::isnan(fm) || fm > 0.5 * (fa + fb) + 1e-9)
            throw std::invalid_argument(std::string(label) +
                                        " fails midpoint convexity");
    }
}

// Convex piecewise-linear interpolant through knots, +inf outside the range.
struct PiecewiseLinear {
    std::vector<double> xs, ys;

    double operator()(double x) const {
        if (x < xs.front() || x > xs.back()) return infinity;
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.end()) return ys.back();
        const std::size_t j = static_cast<std::size_t>(it - xs.begin());
        const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
        return ys[j - 1] + t * (ys[j] - ys[j - 1]);
    }
};

PiecewiseLinear make_piecewise(const std::vector<std::pair<double, double>>& knots,
                               const char* label) {
    if (knots.size() < 2)
        throw std::invalid_argument(std::string(label) + " needs >= 2 knots");
    PiecewiseLinear f;
    for (const auto& [x, y] : knots) {
        if (!std::isfinite(x) || !std::isfinite(y))
            throw std::invalid_argument(std::string(label) + " has non-finite knot");
        if (!f.xs.empty() && x <= f.xs.back())
            throw std::invalid_argument(std::string(label) +
                                        " knots must be strictly increasing");
        f.xs.push_back(x);
        f.ys.push_back(y);
    }
    double prev_slope = -infinity;
    for (std::size_t j = 1; j < f.xs.size(); ++j) {
        const double slope = (f.ys[j] - f.ys[j - 1]) / (f.xs[j] - f.xs[j - 1]);
        if (slope < prev_slope - 1e-12)
            throw std::invalid_argument(std::string(label) +
                                        " knot slopes must be nondecreasing");
        prev_slope = slope;
    }
    if (f.xs.front() > 0.0 || f.xs.back() < 0.0 || std::fabs(f(0.0)) > 1e-9)
        throw std::invalid_argument(std::string(label) +
                                    " must interpolate 0 at the origin");
    return f;
}

double guarded(double v) { return std::isfinite(v) ? v : infinity; }

}  // namespace

PenaltySpec::PenaltySpec(Scalar h, Scalar h0, Scalar h1, Weight delta,
                         std::string name)
    : h_(std::move(h)), h0_(std::move(h0)), h1_(std::move(h1)),
      delta_(std::move(delta)), name_(std::move(name)) {
    if (!h_ || !h0_ || !h1_ || !delta_)
        throw std::invalid_argument("penalty spec: empty component");
    if (name_.empty()) throw std::invalid_argument("penalty spec: empty name");
    if (std::fabs(h_(0.0)) > 1e-12 || std::fabs(h0_(0.0)) > 1e-12 ||
        std::fabs(h1_(0.0)) > 1e-12)
        throw std::invalid_argument("penalty spec: components must vanish at 0");
    std::mt19937_64 gen(0x5eedf00dULL);
    check_convex(h_, -3.0, 3.0, "h", gen);
    check_convex(h0_, -3.0, 3.0, "h0", gen);
    check_convex(h1_, -0.999, 3.0, "h1", gen);
}

PenaltySpec PenaltySpec::entropic() {
    auto ident = [](double x) { return x; };
    auto half_square = [](double x) { return 0.5 * x * x; };
    auto kl = [](double x) {
        if (x < -1.0) return infinity;
        if (x == -1.0) return 1.0;
        return (1.0 + x) * std::log1p(x) - x;
    };
    auto one = [](double, double) { return 1.0; };
    return PenaltySpec(ident, half_square, kl, one, "entropic");
}

PenaltySpec PenaltySpec::quadratic() {
    auto ident = [](double x) { return x; };
    auto half_square = [](double x) { return 0.5 * x * x; };
    auto one = [](double, double) { return 1.0; };
    return PenaltySpec(ident, half_square, half_square, one, "quadratic");
}

PenaltySpec PenaltySpec::custom(const std::vector<std::pair<double, double>>& h,
                                const std::vector<std::pair<double, double>>& h0,
                                const std::vector<std::pair<double, double>>& h1,
                                double delta_constant, std::string name) {
    if (!std::isfinite(delta_constant) || delta_constant < 0.0)
        throw std::invalid_argument("custom spec: delta must be finite and >= 0");
    PiecewiseLinear fh = make_piecewise(h, "h");
    PiecewiseLinear fh0 = make_piecewise(h0, "h0");
    PiecewiseLinear fh1 = make_piecewise(h1, "h1");
    auto weight = [delta_constant](double, double) { return delta_constant; };
    return PenaltySpec(fh, fh0, fh1, weight, std::move(name));
}

double penalty_integrand(const PenaltySpec& spec,
                         const GirsanovCoefficients& theta,
                         const LevyTriplet& model, double t) {
    double inner = model.has_brownian() ? spec.h0(theta.theta0(t)) : 0.0;
    for (const JumpAtom& atom : model.atoms())
        inner += spec.delta(t, atom.size) * spec.h1(theta.theta1(t, atom.size)) *
                 atom.rate;
    if (!std::isfinite(inner)) return infinity;
    return guarded(spec.h(inner));
}

double penalty_quadrature(const PenaltySpec& spec,
                          const GirsanovCoefficients& theta,
                          const LevyTriplet& model, double horizon) {
    if (!(horizon > 0.0) || horizon > theta.horizon() + 1e-9)
        throw std::invalid_argument("penalty horizon outside coefficient horizon");
    return integrate(
        [&](double t) { return penalty_integrand(spec, theta, model, t); }, 0.0,
        horizon);
}

MonteCarloEstimate penalty_value(const PenaltySpec& spec,
                                 const GirsanovCoefficients& theta,
                                 const LevyTriplet& model, double horizon,
                                 std::size_t steps, std::size_t n_paths,
                                 RngStream rng) {
    if (n_paths < 2) throw std::invalid_argument("penalty_value needs >= 2 paths");
    // Deterministic coefficients: the time integral is the same on every
    // surviving path, so the density terminal carries all the randomness.
    const double time_integral = penalty_quadrature(spec, theta, model, horizon);
    if (!is_finite(time_integral)) return {infinity, 0.0, n_paths};
    Accumulator acc;
    for (std::size_t p = 0; p < n_paths; ++p) {
        const LevyPath path = simulate_path(model, horizon, steps, rng.advanced(p));
        const DensityPath density = stochastic_exponential(path, theta);
        acc.add(density.terminal() * time_integral);
    }
    return acc.estimate();
}

double PathFunctional::operator()(const LevyPath& path) const {
    if (!f) throw std::logic_error("path functional is empty");
    return std::clamp(f(path), -clip_bound, clip_bound);
}

PathFunctional PathFunctional::scaled_brownian(double scale, double clip_bound) {
    char label[64];
    std::snprintf(label, sizeof label, "%g*W_T", scale);
    return {label, [scale](const LevyPath& p) { return scale * p.brownian.back(); },
            clip_bound};
}

PathFunctional PathFunctional::scaled_level(double scale, double clip_bound) {
    char label[64];
    std::snprintf(label, sizeof label, "%g*L_T", scale);
    return {label, [scale](const LevyPath& p) { return scale * p.level.back(); },
            clip_bound};
}

PathFunctional PathFunctional::constant(double value, double clip_bound) {
    char label[64];
    std::snprintf(label, sizeof label, "const %g", value);
    return {label, [value](const LevyPath&) { return value; }, clip_bound};
}

PathBatchStats collect_path_stats(const LevyTriplet& model, double horizon,
                                  std::size_t steps, std::size_t n_paths,
                                  RngStream rng,
                                  const std::function<double(const LevyPath&)>& f) {
    if (n_paths < 2) throw std::invalid_argument("path stats need >= 2 paths");
    if (!f) throw std::invalid_argument("path stats need a position functional");
    PathBatchStats stats;
    stats.horizon = horizon;
    stats.w_terminal.reserve(n_paths);
    stats.jump_counts.reserve(n_paths);
    stats.position.reserve(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        const LevyPath path = simulate_path(model, horizon, steps, rng.advanced(p));
        stats.w_terminal.push_back(path.brownian.back());
        std::vector<std::uint32_t> counts(model.atoms().size(), 0);
        for (const JumpEvent& ev : path.jumps)
            ++counts[ev.atom];
        stats.jump_counts.push_back(std::move(counts));
        stats.position.push_back(f(path));
    }
    return stats;
}

double terminal_density_from_stats(const LevyTriplet& model,
                                   const PathBatchStats& stats, std::size_t path,
                                   double theta0, double theta1) {
    const double horizon = stats.horizon;
    double log_density = 0.0;
    if (model.has_brownian())
        log_density += theta0 * stats.w_terminal[path] -
                       0.5 * theta0 * theta0 * horizon;
    log_density -= theta1 * model.total_rate() * horizon;
    const double g = 1.0 + theta1;
    std::uint64_t total_jumps = 0;
    for (std::size_t i = 0; i < model.atoms().size(); ++i)
        total_jumps += stats.jump_counts[path][i];
    if (g <= 0.0) return total_jumps > 0 ? 0.0 : std::exp(log_density);
    log_density += static_cast<double>(total_jumps) * std::log(g);
    return std::exp(log_density);
}

namespace {

struct GridAxis {
    std::vector<double> points;
    double span = 0.0;  // half cell width, 0 for a collapsed axis
};

GridAxis make_axis(bool active, double lo, double hi, int n) {
    GridAxis axis;
    if (!active) {
        axis.points = {0.0};
        return axis;
    }
    if (n < 1 || !(hi >= lo)) throw std::invalid_argument("bad theta grid");
    if (n == 1) {
        axis.points = {0.5 * (lo + hi)};
        return axis;
    }
    axis.points.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        axis.points.push_back(lo + (hi - lo) * k / (n - 1));
    axis.span = 0.5 * (hi - lo) / (n - 1);
    return axis;
}

// theta(Q_theta) for constant coefficients, without building the coefficient
// object (the family sweep calls this thousands of times).
double constant_penalty(const PenaltySpec& spec, const LevyTriplet& model,
                        double horizon, double theta0, double theta1) {
    const double brownian_part = model.has_brownian() ? spec.h0(theta0) : 0.0;
    const double jump_unit = spec.h1(theta1);
    if (!std::isfinite(brownian_part) || !std::isfinite(jump_unit))
        return infinity;
    return integrate(
        [&](double t) {
            double inner = brownian_part;
            for (const JumpAtom& atom : model.atoms())
                inner += spec.delta(t, atom.size) * jump_unit * atom.rate;
            if (!std::isfinite(inner)) return infinity;
            double v = spec.h(inner);
            return std::isfinite(v) ? v : infinity;
        },
        0.0, horizon);
}

}  // namespace

RiskResult risk_measure_on_stats(const RiskProblem& problem,
                                 const PathBatchStats& stats,
                                 std::size_t optimizer_budget,
                                 double position_scale) {
    const LevyTriplet& model = problem.model;
    if (std::fabs(stats.horizon - problem.horizon) > 1e-12)
        throw std::invalid_argument("path stats horizon mismatch");
    const std::size_t n = stats.position.size();
    if (n < 2 || stats.w_terminal.size() != n || stats.jump_counts.size() != n)
        throw std::invalid_argument("inconsistent path stats");

    const double clip = problem.position.clip_bound;
    std::vector<double> loss(n);  // -X per path, already clipped
    for (std::size_t p = 0; p < n; ++p)
        loss[p] = -std::clamp(position_scale * stats.position[p], -clip, clip);

    const GridAxis axis0 = make_axis(model.has_brownian(), problem.family.theta0_lo,
                                     problem.family.theta0_hi,
                                     problem.family.theta0_points);
    const GridAxis axis1 = make_axis(!model.atoms().empty(),
                                     problem.family.theta1_lo,
                                     problem.family.theta1_hi,
                                     problem.family.theta1_points);
    const std::size_t grid_size = axis0.points.size() * axis1.points.size();
    if (optimizer_budget < grid_size)
        throw std::invalid_argument("optimizer budget smaller than family grid");

    std::size_t evaluations = 0;
    Accumulator last_acc;
    auto objective = [&](double theta0, double theta1) {
        ++evaluations;
        const double penalty =
            constant_penalty(problem.spec, model, problem.horizon, theta0, theta1);
        if (!is_finite(penalty)) return -infinity;
        Accumulator acc;
        for (std::size_t p = 0; p < n; ++p)
            acc.add(terminal_density_from_stats(model, stats, p, theta0, theta1) *
                    loss[p]);
        last_acc = acc;
        return acc.mean() - penalty;
    };

    double best0 = axis0.points.front(), best1 = axis1.points.front();
    double best = -infinity;
    for (double t0 : axis0.points)
        for (double t1 : axis1.points) {
            const double v = objective(t0, t1);
            if (v > best) {
                best = v;
                best0 = t0;
                best1 = t1;
            }
        }

    // Coordinate-wise golden-section polish inside the bracketing cells.
    for (int round = 0; round < 3; ++round) {
        const double before = best;
        if (axis0.span > 0.0 && optimizer_budget > evaluations + 24) {
            const int allowed = static_cast<int>(
                std::min<std::size_t>(48, optimizer_budget - evaluations - 1));
            const double lo = std::max(problem.family.theta0_lo, best0 - 2.0 * axis0.span);
            const double hi = std::min(problem.family.theta0_hi, best0 + 2.0 * axis0.span);
            const double x = golden_section_max(
                [&](double t0) { return objective(t0, best1); }, lo, hi, allowed,
                1e-7, &evaluations);
            const double v = objective(x, best1);
            if (v > best) {
                best = v;
                best0 = x;
            }
        }
        if (axis1.span > 0.0 && optimizer_budget > evaluations + 24) {
            const int allowed = static_cast<int>(
                std::min<std::size_t>(48, optimizer_budget - evaluations - 1));
            const double lo = std::max(problem.family.theta1_lo, best1 - 2.0 * axis1.span);
            const double hi = std::min(problem.family.theta1_hi, best1 + 2.0 * axis1.span);
            const double x = golden_section_max(
                [&](double t1) { return objective(best0, t1); }, lo, hi, allowed,
                1e-7, &evaluations);
            const double v = objective(best0, x);
            if (v > best) {
                best = v;
                best1 = x;
            }
        }
        if (best <= before + 1e-12) break;
    }

    RiskResult result;
    result.value = objective(best0, best1);  // refresh last_acc at the argmax
    result.theta0 = best0;
    result.theta1 = best1;
    result.se = last_acc.standard_error();
    result.evaluations = evaluations;
    const double edge0 = axis0.span > 0.0 ? axis0.span : 0.0;
    const double edge1 = axis1.span > 0.0 ? axis1.span : 0.0;
    result.boundary =
        (axis0.span > 0.0 && (best0 - problem.family.theta0_lo <= edge0 ||
                              problem.family.theta0_hi - best0 <= edge0)) ||
        (axis1.span > 0.0 && (best1 - problem.family.theta1_lo <= edge1 ||
                              problem.family.theta1_hi - best1 <= edge1));
    return result;
}

RiskResult risk_measure(const RiskProblem& problem, std::size_t optimizer_budget,
                        std::size_t n_paths, RngStream rng) {
    const PathBatchStats stats = collect_path_stats(
        problem.model, problem.horizon, problem.steps, n_paths, rng,
        problem.position.f);
    return risk_measure_on_stats(problem, stats, optimizer_budget, 1.0);
}

ConvexityReport convexity_evidence(const PenaltySpec& spec,
                                   const LevyTriplet& model, double horizon,
                                   std::size_t steps,
                                   const GirsanovCoefficients& theta_a,
                                   const GirsanovCoefficients& theta_b,
                                   double lambda, std::size_t n_paths,
                                   RngStream rng) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("lambda must lie in [0, 1]");
    if (n_paths < 2) throw std::invalid_argument("convexity needs >= 2 paths");

    const std::vector<JumpAtom>& atoms = model.atoms();
    const double mu = 1.0 - lambda;
    Accumulator lhs_acc, rhs_acc, diff_acc;
    std::size_t degenerate = 0;

    for (std::size_t p = 0; p < n_paths; ++p) {
        const LevyPath path = simulate_path(model, horizon, steps, rng.advanced(p));
        const DensityPath da = stochastic_exponential(path, theta_a);
        const DensityPath db = stochastic_exponential(path, theta_b);
        const std::size_t m = da.times.size();

        // One shared cost kernel keeps the three integrals bit-compatible, so
        // lambda in {0, 1} cancels exactly.
        auto segment_cost = [&](double t, double c0, const std::vector<double>& c1) {
            double inner = model.has_brownian() ? spec.h0(c0) : 0.0;
            for (std::size_t i = 0; i < atoms.size(); ++i)
                inner += spec.delta(t, atoms[i].size) * spec.h1(c1[i]) *
                         atoms[i].rate;
            const double v = spec.h(inner);
            if (!std::isfinite(v))
                throw std::runtime_error("penalty integrand diverged");
            return v;
        };

        std::vector<double> a1(atoms.size()), b1(atoms.size()), l1(atoms.size());
        double ja = 0.0, jb = 0.0, jl = 0.0;
        for (std::size_t k = 0; k + 1 < m; ++k) {
            const double dt = da.times[k + 1] - da.times[k];
            if (dt <= 0.0) continue;
            const double t = da.times[k];
            const double a0 = theta_a.theta0(t);
            const double b0 = theta_b.theta0(t);
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                a1[i] = theta_a.theta1(t, atoms[i].size);
                b1[i] = theta_b.theta1(t, atoms[i].size);
            }
            ja += segment_cost(t, a0, a1) * dt;
            jb += segment_cost(t, b0, b1) * dt;
            if (lambda == 1.0) {
                jl += segment_cost(t, a0, a1) * dt;
            } else if (lambda == 0.0) {
                jl += segment_cost(t, b0, b1) * dt;
            } else {
                const double wa = lambda * da.values[k];
                const double wb = mu * db.values[k];
                const double den = wa + wb;
                if (den <= 0.0) continue;  // mixture dead on this segment
                for (std::size_t i = 0; i < atoms.size(); ++i)
                    l1[i] = (wa * a1[i] + wb * b1[i]) / den;
                jl += segment_cost(t, (wa * a0 + wb * b0) / den, l1) * dt;
            }
        }

        const double da_t = da.terminal();
        const double db_t = db.terminal();
        if (da_t == 0.0 && db_t == 0.0) ++degenerate;
        const double lhs_sample = (lambda * da_t + mu * db_t) * jl;
        const double rhs_sample = lambda * da_t * ja + mu * db_t * jb;
        lhs_acc.add(lhs_sample);
        rhs_acc.add(rhs_sample);
        diff_acc.add(rhs_sample - lhs_sample);
    }

    ConvexityReport report;
    report.lambda = lambda;
    report.lhs = lhs_acc.mean();
    report.rhs = rhs_acc.mean();
    report.margin = diff_acc.mean();
    report.se = diff_acc.standard_error();
    report.degenerate_paths = degenerate;
    report.pass = report.margin >= -3.0 * report.se;
    return report;
}

MinimalityReport minimality_evidence(const RiskProblem& problem,
                                     const std::vector<std::pair<double, double>>& q_thetas,
                                     double scale_bound, int scale_levels,
                                     std::size_t budget, std::size_t n_paths,
                                     RngStream rng, double tolerance) {
    if (q_thetas.empty()) throw std::invalid_argument("no candidate measures");
    if (!(scale_bound > 0.0) || scale_levels < 1)
        throw std::invalid_argument("bad scale grid");
    if (budget < 3)
        throw std::invalid_argument("budget below the level-0 scale grid");

    const PathBatchStats stats = collect_path_stats(
        problem.model, problem.horizon, problem.steps, n_paths, rng,
        problem.position.f);
    const std::size_t n = stats.position.size();
    const std::size_t grid_size =
        (problem.model.has_brownian()
             ? static_cast<std::size_t>(problem.family.theta0_points)
             : 1) *
        (problem.model.atoms().empty()
             ? 1
             : static_cast<std::size_t>(problem.family.theta1_points));
    const std::size_t rho_budget = grid_size + 400;

    MinimalityReport report;
    for (const auto& [q0, q1] : q_thetas) {
        const double penalty = constant_penalty(problem.spec, problem.model,
                                                problem.horizon, q0, q1);
        std::vector<double> density(n);
        for (std::size_t p = 0; p < n; ++p)
            density[p] = terminal_density_from_stats(problem.model, stats, p, q0, q1);

        std::size_t rho_calls = 0;
        double lower = -infinity, lower_se = 0.0, prev_gap = infinity;
        auto try_scale = [&](double c) {
            Accumulator acc;  // E_Q[-X_c]
            const double clip = problem.position.clip_bound;
            for (std::size_t p = 0; p < n; ++p)
                acc.add(density[p] *
                        -std::clamp(c * stats.position[p], -clip, clip));
            const RiskResult rho =
                risk_measure_on_stats(problem, stats, rho_budget, c);
            ++rho_calls;
            const double value = acc.mean() - rho.value;
            if (value > lower) {
                lower = value;
                lower_se = std::sqrt(acc.standard_error() * acc.standard_error() +
                                     rho.se * rho.se);
            }
        };

        for (int level = 0; level < scale_levels; ++level) {
            const double step = scale_bound / static_cast<double>(1 << level);
            std::vector<double> fresh;
            if (level == 0) {
                fresh = {-scale_bound, 0.0, scale_bound};
            } else {
                for (double c = -scale_bound + step; c < scale_bound;
                     c += 2.0 * step)
                    fresh.push_back(c);
            }
            if (rho_calls + fresh.size() > budget) break;
            for (double c : fresh) try_scale(c);

            MinimalityRow row;
            row.theta0 = q0;
            row.theta1 = q1;
            row.level = level;
            row.rho_evaluations = rho_calls;
            row.lower_bound = lower;
            row.penalty = penalty;
            row.gap = penalty - lower;
            row.se = lower_se;
            row.pass = lower <= penalty + tolerance + 3.0 * lower_se;
            if (row.gap > prev_gap + 1e-12) report.gaps_nonincreasing = false;
            prev_gap = row.gap;
            report.rows.push_back(row);
        }
    }
    return report;
}

}  // namespace minpen
