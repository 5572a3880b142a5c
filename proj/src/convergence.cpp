#include "minpen/convergence.hpp"

#include <cmath>
#include <stdexcept>

namespace minpen {

ConvergenceTable stopped_variant(const ConvergenceExperiment& experiment,
                                 double stop_level) {
    if (experiment.n_values.empty())
        throw std::invalid_argument("stopped_variant: no n values");
    if (experiment.n_paths < 2)
        throw std::invalid_argument("stopped_variant: need at least 2 paths");
    if (!(experiment.epsilon > 0.0))
        throw std::invalid_argument("stopped_variant: epsilon must be > 0");
    if (!(stop_level > 0.0))
        throw std::invalid_argument("stopped_variant: stop level must be > 0");

    // Coefficients for every n are built once; each must be admissible.
    std::vector<GirsanovCoefficients> members;
    members.reserve(experiment.n_values.size());
    for (int n : experiment.n_values) members.push_back(experiment.sequence(n));

    std::vector<Accumulator> l1(members.size()), exceed(members.size());
    for (std::size_t p = 0; p < experiment.n_paths; ++p) {
        const LevyPath path =
            simulate_path(experiment.model, experiment.horizon, experiment.steps,
                          experiment.rng.advanced(p));
        const DensityPath base = stochastic_exponential(path, experiment.base);
        for (std::size_t m = 0; m < members.size(); ++m) {
            const DensityPath dn = stochastic_exponential(path, members[m]);
            // First merged-axis point where the gap reaches the stop level.
            double tau = path.horizon();
            std::size_t tau_idx = base.times.size() - 1;
            for (std::size_t i = 0; i < base.times.size(); ++i) {
                if (std::abs(dn.values[i] - base.values[i]) >= stop_level) {
                    tau = base.times[i];
                    tau_idx = i;
                    break;
                }
            }
            l1[m].add(std::abs(dn.values[tau_idx] - base.values[tau_idx]));
            const double qv = quadratic_variation_diff_until(
                dn, base, members[m], experiment.base, path, tau);
            exceed[m].add(qv > experiment.epsilon ? 1.0 : 0.0);
        }
    }

    ConvergenceTable table;
    for (std::size_t m = 0; m < members.size(); ++m) {
        table.rows.push_back({experiment.n_values[m], l1[m].mean(),
                              l1[m].standard_error(), exceed[m].mean(),
                              exceed[m].standard_error()});
        if (m > 0 &&
            table.rows[m].l1_mean > table.rows[m - 1].l1_mean + 1e-12)
            table.l1_nonincreasing = false;
    }
    return table;
}

ConvergenceTable run_convergence(const ConvergenceExperiment& experiment) {
    return stopped_variant(experiment, infinity);
}

}  // namespace minpen
