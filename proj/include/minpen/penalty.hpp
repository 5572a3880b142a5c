#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "minpen/density.hpp"

namespace minpen {

// Building blocks of the penalty family
//   theta(Q) = E_Q[ int_0^T h( h0(theta0(t)) + sum_i delta(t, x_i) *
//                                h1(theta1(t, x_i)) * rate_i ) dt ].
// h, h0, h1 must be convex with value 0 at 0; this is spot-checked with 1000
// seeded random midpoint triples at construction. delta is a nonnegative
// weight on (time, atom height).
class PenaltySpec {
  public:
    using Scalar = std::function<double(double)>;
    using Weight = std::function<double(double, double)>;

    PenaltySpec(Scalar h, Scalar h0, Scalar h1, Weight delta, std::string name);

    double h(double x) const { return h_(x); }
    double h0(double x) const { return h0_(x); }
    double h1(double x) const { return h1_(x); }
    double delta(double t, double x) const { return delta_(t, x); }
    const std::string& name() const { return name_; }

    // h = id, h0 = x^2/2, h1 = (1+x)log(1+x) - x, delta = 1: the relative
    // entropy rate of the measure change.
    static PenaltySpec entropic();
    // h = id, h0 = h1 = x^2/2, delta = 1.
    static PenaltySpec quadratic();
    // Piecewise-linear convex interpolants through the given knots; +inf
    // outside the knot range (divergence sentinel for the quadrature).
    static PenaltySpec custom(const std::vector<std::pair<double, double>>& h,
                              const std::vector<std::pair<double, double>>& h0,
                              const std::vector<std::pair<double, double>>& h1,
                              double delta_constant, std::string name = "custom");

  private:
    Scalar h_, h0_, h1_;
    Weight delta_;
    std::string name_;
};

// Integrand of the penalty at time t for deterministic coefficients.
double penalty_integrand(const PenaltySpec& spec,
                         const GirsanovCoefficients& theta,
                         const LevyTriplet& model, double t);

// Quadrature route: deterministic coefficients make the time integral a plain
// integral, and E_Q[1] = 1 supplies the expectation. Returns +inf when the
// integrand diverges.
double penalty_quadrature(const PenaltySpec& spec,
                          const GirsanovCoefficients& theta,
                          const LevyTriplet& model, double horizon);

// Monte Carlo route through the density: E_P[D_T * int_0^{tau0 ^ T} ...dt].
// Must agree with the quadrature within noise; the spread of the two routes
// is the standard implementation check.
MonteCarloEstimate penalty_value(const PenaltySpec& spec,
                                 const GirsanovCoefficients& theta,
                                 const LevyTriplet& model, double horizon,
                                 std::size_t steps, std::size_t n_paths,
                                 RngStream rng);

// Payoff functional of a path, clipped to [-clip_bound, clip_bound].
struct PathFunctional {
    std::string name;
    std::function<double(const LevyPath&)> f;
    double clip_bound = 8.0;

    double operator()(const LevyPath& path) const;

    static PathFunctional scaled_brownian(double scale, double clip_bound = 8.0);
    static PathFunctional scaled_level(double scale, double clip_bound = 8.0);
    static PathFunctional constant(double value, double clip_bound = 8.0);
};

// Search family for the risk supremum: constant coefficients (theta0, theta1)
// on a box, theta1 applied to every atom. A dimension collapses when the
// model has no Brownian part (theta0 fixed 0) or no atoms (theta1 fixed 0).
struct ThetaFamily {
    double theta0_lo = -2.0, theta0_hi = 2.0;
    int theta0_points = 41;
    double theta1_lo = -0.9, theta1_hi = 2.0;
    int theta1_points = 30;
};

struct RiskProblem {
    LevyTriplet model;
    double horizon;
    std::size_t steps;
    PathFunctional position;
    PenaltySpec spec;
    ThetaFamily family;
};

// Per-path sufficient statistics for constant-coefficient candidates: the
// density terminal value only needs W_T and the per-atom jump counts, so a
// family sweep reuses one immutable batch.
struct PathBatchStats {
    double horizon = 0.0;
    std::vector<double> w_terminal;
    std::vector<std::vector<std::uint32_t>> jump_counts;  // [path][atom]
    std::vector<double> position;                          // raw functional value
};

PathBatchStats collect_path_stats(const LevyTriplet& model, double horizon,
                                  std::size_t steps, std::size_t n_paths,
                                  RngStream rng,
                                  const std::function<double(const LevyPath&)>& f);

// Terminal density for constant coefficients from the statistics.
double terminal_density_from_stats(const LevyTriplet& model,
                                   const PathBatchStats& stats, std::size_t path,
                                   double theta0, double theta1);

struct RiskResult {
    double value = 0.0;
    double theta0 = 0.0;
    double theta1 = 0.0;
    double se = 0.0;       // noise of E_Q[-X] at the reported argmax
    bool boundary = false; // argmax pinned at the family box edge
    std::size_t evaluations = 0;
};

// rho(X) = sup over the family of E_Q[-X] - theta(Q): full grid sweep (ties
// resolved toward the lowest grid index) followed by coordinate-wise
// golden-section refinement, within `optimizer_budget` objective evaluations.
// Requires optimizer_budget >= family grid size.
RiskResult risk_measure(const RiskProblem& problem, std::size_t optimizer_budget,
                        std::size_t n_paths, RngStream rng);
// Same search on a pre-collected batch; `position_scale` rescales the stored
// functional values before clipping.
RiskResult risk_measure_on_stats(const RiskProblem& problem,
                                 const PathBatchStats& stats,
                                 std::size_t optimizer_budget,
                                 double position_scale = 1.0);

struct ConvexityReport {
    double lambda = 0.0;
    double lhs = 0.0;     // theta(Q^lambda)
    double rhs = 0.0;     // lambda theta(Q) + (1-lambda) theta(Q~)
    double margin = 0.0;  // mean of per-path rhs - lhs samples
    double se = 0.0;      // standard error of that difference
    std::size_t degenerate_paths = 0;  // both densities killed before T
    bool pass = false;    // margin >= -3 se
};

// Mixture-coefficient convexity evidence on a shared batch. The mixture
// measure lambda Q + (1-lambda) Q~ has density-weighted coefficients
//   theta^lambda = (l D_- theta + (1-l) D~_- theta~) / (l D_- + (1-l) D~_-),
// and its penalty is estimated with the same left-endpoint time rule as both
// endpoints, so lambda = 0 or 1 reproduces the endpoint exactly.
ConvexityReport convexity_evidence(const PenaltySpec& spec,
                                   const LevyTriplet& model, double horizon,
                                   std::size_t steps,
                                   const GirsanovCoefficients& theta_a,
                                   const GirsanovCoefficients& theta_b,
                                   double lambda, std::size_t n_paths,
                                   RngStream rng);

struct MinimalityRow {
    double theta0;
    double theta1;
    int level;
    std::size_t rho_evaluations;
    double lower_bound;   // sup over sampled X of E_Q[-X] - rho(X)
    double penalty;       // theta(Q) by quadrature
    double gap;           // penalty - lower_bound
    double se;
    bool pass;            // lower_bound <= penalty + tolerance + 3 se
};

struct MinimalityReport {
    std::vector<MinimalityRow> rows;
    bool gaps_nonincreasing = true;  // per theta, across refinement levels
};

// Biduality evidence that the penalty is minimal: for each constant-candidate
// measure Q_theta, refine a dyadic grid of position scales and compare the
// best biduality value against theta(Q). The budget caps rho evaluations per
// candidate measure.
MinimalityReport minimality_evidence(const RiskProblem& problem,
                                     const std::vector<std::pair<double, double>>& q_thetas,
                                     double scale_bound, int scale_levels,
                                     std::size_t budget, std::size_t n_paths,
                                     RngStream rng, double tolerance = 1e-3);

}  // namespace minpen
