#include "minpen/finite_duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "minpen/optimize.hpp"

namespace minpen {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// Enumerate compositions (k_1,...,k_m) of `resolution` and hand the visitor
// the corresponding probability vector over the support atoms.
template <typename Visitor>
void for_each_simplex_point(std::size_t m, int resolution, Visitor&& visit) {
    std::vector<int> k(m, 0);
    std::vector<double> q(m, 0.0);
    k[0] = resolution;
    while (true) {
        for (std::size_t i = 0; i < m; ++i)
            q[i] = static_cast<double>(k[i]) / resolution;
        visit(q);
        if (k[m - 1] == resolution) break;
        if (k[0] > 0) {
            --k[0];
            ++k[1];
        } else {
            std::size_t j = 1;
            while (k[j] == 0) ++j;
            k[0] = k[j] - 1;
            k[j] = 0;
            ++k[j + 1];
        }
    }
}

// Probability vector over support atoms -> density over all atoms.
DensityVector support_density(const FiniteSpace& space,
                              const std::vector<double>& q_support) {
    std::vector<double> z(space.size(), 0.0);
    const auto& sup = space.support();
    for (std::size_t j = 0; j < sup.size(); ++j)
        z[sup[j]] = q_support[j] / space.weight(sup[j]);
    return DensityVector(space, z);
}

std::vector<double> full_probabilities(const FiniteSpace& space,
                                       const std::vector<double>& q_support) {
    std::vector<double> q(space.size(), 0.0);
    const auto& sup = space.support();
    for (std::size_t j = 0; j < sup.size(); ++j) q[sup[j]] = q_support[j];
    return q;
}

// Supremum of a functional over the simplex of support probabilities.
struct SimplexSup {
    double value = neg_inf;
    std::vector<double> argmax;  // support probabilities
};

template <typename F>
SimplexSup simplex_sup(const FiniteSpace& space, const F& objective,
                       const SimplexSearchOptions& opts) {
    const std::size_t m = space.support().size();
    if (opts.resolution < 1)
        throw std::invalid_argument("simplex_sup: resolution < 1");

    SimplexSup best;
    for_each_simplex_point(m, opts.resolution, [&](const std::vector<double>& q) {
        const double v = objective(q);
        if (v > best.value) best = {v, q};
    });
    if (best.value == neg_inf)
        throw std::runtime_error(
            "simplex_sup: objective is -inf on the whole grid");

    if (opts.refine && m >= 2) {
        // Ascend over the free coordinates q_1..q_{m-1}; the last one is the
        // remaining mass. Infeasible points evaluate to -inf. Rounding in the
        // grid coordinates can leave the mass balance off by a few ulps (the
        // incumbent itself may carry such dust), so tiny negatives are
        // clamped rather than rejected.
        constexpr double mass_slack = 1e-12;
        auto reduced = [&](const std::vector<double>& free) {
            std::vector<double> q(m);
            double rest = 1.0;
            for (std::size_t j = 0; j + 1 < m; ++j) {
                if (free[j] < -mass_slack) return neg_inf;
                q[j] = std::max(free[j], 0.0);
                rest -= q[j];
            }
            if (rest < -mass_slack) return neg_inf;
            q[m - 1] = std::max(rest, 0.0);
            return objective(q);
        };
        std::vector<double> start(best.argmax.begin(), best.argmax.end() - 1);
        const double step = 0.5 / opts.resolution;
        const SearchPoint polished =
            nelder_mead_max(reduced, start, step, opts.refine_iterations);
        if (polished.value > best.value) {
            std::vector<double> q(m);
            double rest = 1.0;
            for (std::size_t j = 0; j + 1 < m; ++j) {
                q[j] = std::max(polished.x[j], 0.0);
                rest -= q[j];
            }
            q[m - 1] = std::max(rest, 0.0);
            best = {polished.value, q};
        }
    }
    return best;
}

}  // namespace

RiskFromPenaltyResult risk_from_penalty_detailed(const FiniteSpace& space,
                                                 const FinitePenalty& penalty,
                                                 const Position& x,
                                                 const SimplexSearchOptions& opts) {
    const auto& sup = space.support();
    auto objective = [&](const std::vector<double>& q) {
        double eq = 0.0;  // E_Q[-X]
        for (std::size_t j = 0; j < sup.size(); ++j) eq -= q[j] * x[sup[j]];
        const double psi = penalty(support_density(space, q));
        if (!std::isfinite(psi)) return neg_inf;
        return eq - psi;
    };
    const SimplexSup best = simplex_sup(space, objective, opts);
    return {best.value, full_probabilities(space, best.argmax)};
}

double risk_from_penalty(const FiniteSpace& space, const FinitePenalty& penalty,
                         const Position& x, const SimplexSearchOptions& opts) {
    return risk_from_penalty_detailed(space, penalty, x, opts).value;
}

RiskEvaluator penalty_risk_evaluator(const FiniteSpace& space,
                                     const FinitePenalty& penalty,
                                     const SimplexSearchOptions& opts) {
    return [space, penalty, opts](const Position& x) {
        return risk_from_penalty(space, penalty, x, opts);
    };
}

MinimalPenaltyResult minimal_penalty(const FiniteSpace& space,
                                     const RiskEvaluator& rho,
                                     const DensityVector& q,
                                     const PositionSamplingPlan& plan) {
    if (!(plan.bound > 0.0) || plan.resolution < 2 || plan.levels < 0)
        throw std::invalid_argument("minimal_penalty: bad sampling plan");
    const std::size_t m = space.size();

    auto objective = [&](const std::vector<double>& xs) {
        const Position x(space, xs);
        return q.expectation(space, x) * -1.0 - rho(x);
    };

    // X = 0 first: guarantees the bound is never below -rho(0).
    const std::vector<double> zero(m, 0.0);
    const double at_zero = objective(zero);

    const BoxSearchResult box =
        box_search_max(objective, zero, std::vector<double>(m, plan.bound),
                       plan.resolution, plan.levels, plan.polish);

    MinimalPenaltyResult out;
    if (box.value > at_zero) {
        out.value = box.value;
        out.argmax = box.argmax;
        out.last_gain = box.last_gain;
    } else {
        out.value = at_zero;
        out.argmax = zero;
        out.last_gain = 0.0;
    }
    out.converged = out.last_gain <= plan.tolerance;
    return out;
}

BiconjugateResult fenchel_biconjugate(const FiniteSpace& space,
                                      const FinitePenalty& penalty,
                                      const DensityVector& q,
                                      const BiconjugateOptions& opts) {
    const auto& sup = space.support();
    const std::size_t m = sup.size();
    const std::size_t d = m > 0 ? m - 1 : 0;  // reduced outer dimension

    // Expand reduced coordinates into a full payoff profile with E_P[U] = 0.
    auto expand = [&](const std::vector<double>& u_free) {
        std::vector<double> u(space.size(), 0.0);
        double dot = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            u[sup[j]] = u_free[j];
            dot += space.weight(sup[j]) * u_free[j];
        }
        u[sup[m - 1]] = -dot / space.weight(sup[m - 1]);
        return u;
    };

    // <Z_q, U> - Psi*(U), with the conjugate taken over the density grid.
    auto outer_value = [&](const std::vector<double>& u,
                           const SimplexSearchOptions& inner) {
        auto conj = [&](const std::vector<double>& qs) {
            double pair = 0.0;
            for (std::size_t j = 0; j < m; ++j) pair += qs[j] * u[sup[j]];
            const double psi = penalty(support_density(space, qs));
            if (!std::isfinite(psi)) return neg_inf;
            return pair - psi;
        };
        const double conjugate = simplex_sup(space, conj, inner).value;
        double pair_q = 0.0;
        for (std::size_t i : sup) pair_q += space.weight(i) * q[i] * u[i];
        return pair_q - conjugate;
    };

    // Project a full-dimension seed onto the E_P[U] = 0 hyperplane (the
    // objective is invariant under the shift) and take its free coordinates.
    auto seed_free = [&](const std::vector<double>& s) {
        double mean = 0.0;
        for (std::size_t i : sup) mean += space.weight(i) * s[i];
        std::vector<double> free(d);
        for (std::size_t j = 0; j < d; ++j) free[j] = s[sup[j]] - mean;
        return free;
    };

    double best = neg_inf;
    std::vector<double> best_free(d, 0.0);
    bool best_from_box = false;

    // Seeds are always scored with the accurate inner supremum.
    for (const auto& s : opts.u_seeds) {
        if (s.size() != space.size())
            throw std::invalid_argument("fenchel_biconjugate: seed size mismatch");
        const std::vector<double> free = seed_free(s);
        const double v = outer_value(expand(free), opts.inner);
        if (v > best) {
            best = v;
            best_free = free;
            best_from_box = false;
        }
    }

    if (d > 0 && opts.u_resolution >= 2) {
        auto cheap = [&](const std::vector<double>& u_free) {
            return outer_value(expand(u_free), opts.inner_coarse);
        };
        const BoxSearchResult scan = box_search_max(
            cheap, std::vector<double>(d, 0.0), std::vector<double>(d, opts.u_bound),
            opts.u_resolution, opts.shrink_levels, /*polish=*/false);
        // Re-score the scan incumbent accurately before comparing with seeds.
        double v = outer_value(expand(scan.argmax), opts.inner);
        std::vector<double> cand = scan.argmax;
        if (opts.polish) {
            auto accurate = [&](const std::vector<double>& u_free) {
                return outer_value(expand(u_free), opts.inner);
            };
            const SearchPoint polished = nelder_mead_max(
                accurate, cand, opts.u_bound / std::max(1, opts.u_resolution - 1));
            if (polished.value > v) {
                v = polished.value;
                cand = polished.x;
            }
        }
        if (v > best) {
            best = v;
            best_free = cand;
            best_from_box = true;
        }
    } else if (d == 0) {
        best = std::max(best, outer_value(expand({}), opts.inner));
    }

    if (best == neg_inf)
        throw std::runtime_error("fenchel_biconjugate: no finite outer value");

    bool boundary = false;
    if (best_from_box)
        for (double uj : best_free)
            boundary = boundary || std::abs(uj) >= 0.999 * opts.u_bound;
    return {best, boundary};
}

AxiomReport check_axioms(const FiniteSpace& space, const RiskEvaluator& rho,
                         int trials, std::uint64_t seed, double tolerance,
                         double position_scale) {
    if (trials < 1) throw std::invalid_argument("check_axioms: trials < 1");
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> entry(-position_scale, position_scale);
    std::uniform_real_distribution<double> bump(0.0, position_scale);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t m = space.size();

    AxiomReport report;
    report.trials_per_axiom = trials;
    auto record = [&](const char* axiom, int trial, double magnitude) {
        if (magnitude > tolerance)
            report.violations.push_back({axiom, trial, magnitude});
    };

    for (int t = 0; t < trials; ++t) {
        std::vector<double> xv(m), yv(m), upv(m);
        for (auto& v : xv) v = entry(gen);
        for (auto& v : yv) v = entry(gen);
        for (std::size_t i = 0; i < m; ++i) upv[i] = xv[i] + bump(gen);
        const double shift = entry(gen);
        const double lambda = unit(gen);

        const Position x(space, xv), y(space, yv), up(space, upv);
        const double rx = rho(x), ry = rho(y);

        // X <= up pointwise, so rho(X) >= rho(up).
        record("monotonicity", t, rho(up) - rx);

        std::vector<double> shifted(m);
        for (std::size_t i = 0; i < m; ++i) shifted[i] = xv[i] + shift;
        record("translation_invariance", t,
               std::abs(rho(Position(space, shifted)) - (rx - shift)));

        std::vector<double> mix(m);
        for (std::size_t i = 0; i < m; ++i)
            mix[i] = lambda * xv[i] + (1.0 - lambda) * yv[i];
        record("convexity", t,
               rho(Position(space, mix)) - (lambda * rx + (1.0 - lambda) * ry));
    }
    return report;
}

}  // namespace minpen
