#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minpen/finite_penalty.hpp"
#include "minpen/finite_space.hpp"

namespace minpen {

// Barycentric grid plus local refinement over the probability simplex on the
// support atoms. Adequate up to |Omega| ~ 8; resolution is the number of grid
// steps per edge.
struct SimplexSearchOptions {
    int resolution = 24;
    bool refine = true;
    int refine_iterations = 400;
};

struct RiskFromPenaltyResult {
    double value;
    // Probability over all atoms at the best point found (zero on null atoms).
    std::vector<double> argmax_probabilities;
};

// rho(X) = sup over densities of E_Q[-X] - psi(Q). Throws if the penalty is
// infinite everywhere on the grid.
RiskFromPenaltyResult risk_from_penalty_detailed(const FiniteSpace& space,
                                                 const FinitePenalty& penalty,
                                                 const Position& x,
                                                 const SimplexSearchOptions& opts = {});
double risk_from_penalty(const FiniteSpace& space, const FinitePenalty& penalty,
                         const Position& x, const SimplexSearchOptions& opts = {});

// Wrap a grid-based risk computation as a reusable evaluator.
RiskEvaluator penalty_risk_evaluator(const FiniteSpace& space,
                                     const FinitePenalty& penalty,
                                     const SimplexSearchOptions& opts = {});

// Sampling plan for the biduality supremum over positions: a hypercube
// [-bound, bound]^|Omega| scanned at `resolution` points per axis, then
// dyadically shrunk around the incumbent for `levels` rounds, then polished.
// The default bound is 4x the unit position scale of the desk examples.
struct PositionSamplingPlan {
    double bound = 4.0;
    int resolution = 5;
    int levels = 10;
    double tolerance = 1e-7;
    bool polish = true;
};

struct MinimalPenaltyResult {
    double value;                 // lower bound for psi*_rho(Q), >= -rho(0)
    std::vector<double> argmax;   // position attaining it
    double last_gain;             // improvement contributed by the final stage
    bool converged;               // last_gain <= plan.tolerance
};

// psi*_rho(Q) = sup over sampled X of E_Q[-X] - rho(X). Non-convergence is
// signalled through `converged` / `last_gain`.
MinimalPenaltyResult minimal_penalty(const FiniteSpace& space,
                                     const RiskEvaluator& rho,
                                     const DensityVector& q,
                                     const PositionSamplingPlan& plan = {});

// Fenchel-Legendre biconjugate via two nested finite suprema. The outer
// search runs over payoff profiles U with E_P[U] = 0 (the objective is
// invariant under constant shifts), the inner supremum over the density grid.
struct BiconjugateOptions {
    double u_bound = 6.0;
    int u_resolution = 7;   // coarse box scan per reduced axis; 0 = seeds only
    int shrink_levels = 10;
    bool polish = true;
    SimplexSearchOptions inner{16, true, 200};         // accurate inner sup
    SimplexSearchOptions inner_coarse{12, false, 0};   // scan-stage inner sup
    // Extra outer candidates (full atom dimension), e.g. known maximizers.
    std::vector<std::vector<double>> u_seeds;
};

struct BiconjugateResult {
    double value;
    bool boundary_hit;  // outer argmax pinned at the u box edge (box too small)
};

BiconjugateResult fenchel_biconjugate(const FiniteSpace& space,
                                      const FinitePenalty& penalty,
                                      const DensityVector& q,
                                      const BiconjugateOptions& opts = {});

// Randomized audit of monotonicity, translation invariance and convexity.
// Reports violations; never throws on a failed axiom.
struct AxiomViolation {
    std::string axiom;
    int trial;
    double magnitude;
};

struct AxiomReport {
    int trials_per_axiom = 0;
    std::vector<AxiomViolation> violations;
    bool clean() const { return violations.empty(); }
};

AxiomReport check_axioms(const FiniteSpace& space, const RiskEvaluator& rho,
                         int trials, std::uint64_t seed, double tolerance = 1e-9,
                         double position_scale = 3.0);

}  // namespace minpen
