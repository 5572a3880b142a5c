#pragma once

#include <functional>
#include <vector>

#include "minpen/common.hpp"
#include "minpen/girsanov.hpp"
#include "minpen/levy.hpp"

namespace minpen {

// Stochastic exponential of the Girsanov martingale along one path, cadlag on
// the merged grid/jump time axis. The four cumulative log parts (Brownian
// integral, its quadratic compensation, the jump compensator, the jump sum)
// add up to log(value) wherever the density is positive; after the kill time
// tau0 the value is exactly zero and the parts stay frozen.
struct DensityPath {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> log_brownian;
    std::vector<double> log_quadratic;
    std::vector<double> log_compensator;
    std::vector<double> log_jump;
    std::vector<std::size_t> jump_points;   // indices into times, per path jump
    std::vector<double> jump_left_values;   // left limits D_{s-} at those jumps
    double tau0 = infinity;                 // +inf when never killed

    bool killed() const { return tau0 < infinity; }
    double terminal() const { return values.back(); }
    // cadlag value at t (t within [0, horizon])
    double value_at(double t) const;
};

// Left-point Ito discretization of the Brownian integral on the path grid;
// time integrals advance with the left-endpoint rule between merged points.
DensityPath stochastic_exponential(const LevyPath& path,
                                   const GirsanovCoefficients& theta);

// Mean and standard error of D_t over fresh paths; equality with 1 within
// noise is the martingale property, strictly below 1 reveals mass loss.
MonteCarloEstimate martingale_check(const LevyTriplet& model,
                                    const GirsanovCoefficients& theta, double t,
                                    std::size_t steps, std::size_t n_paths,
                                    RngStream rng);

// E_P[D_T * f(path)] over a fixed batch; the estimator of E_Q[f].
MonteCarloEstimate reweighted_expectation(
    const std::vector<LevyPath>& paths, const std::vector<DensityPath>& densities,
    const std::function<double(const LevyPath&)>& f);

struct CompensatorCheck {
    double empirical;  // reweighted jump rate of the atom
    double target;     // rate_i * avg_t (1 + theta1(t, x_i))
    double se;
};

CompensatorCheck compensator_check(const LevyTriplet& model,
                                   const GirsanovCoefficients& theta,
                                   std::size_t atom_index, std::size_t steps,
                                   std::size_t n_paths, RngStream rng);

// Quadratic variation of D^a - D^b on [0, t_stop] along one path, with
// left limits: int (D^a theta0^a - D^b theta0^b)^2 ds plus the squared jump
// differences. Both densities must come from the same path.
double quadratic_variation_diff_until(const DensityPath& a, const DensityPath& b,
                                      const GirsanovCoefficients& theta_a,
                                      const GirsanovCoefficients& theta_b,
                                      const LevyPath& path, double t_stop);
double quadratic_variation_diff(const DensityPath& a, const DensityPath& b,
                                const GirsanovCoefficients& theta_a,
                                const GirsanovCoefficients& theta_b,
                                const LevyPath& path);

}  // namespace minpen
