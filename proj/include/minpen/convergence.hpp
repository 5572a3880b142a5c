#pragma once

#include <functional>
#include <vector>

#include "minpen/density.hpp"

namespace minpen {

// Sequence study D^n -> D on a common batch of paths (common random numbers:
// every n sees the same simulated paths, so columns are directly comparable).
struct ConvergenceExperiment {
    LevyTriplet model;
    double horizon;
    std::size_t steps;
    GirsanovCoefficients base;
    std::function<GirsanovCoefficients(int)> sequence;
    std::vector<int> n_values;
    double epsilon;      // exceedance threshold for the QV column
    std::size_t n_paths;
    RngStream rng;
};

struct ConvergenceRow {
    int n;
    double l1_mean;         // E|D^n_tau - D_tau|
    double l1_se;
    double qv_exceedance;   // P([D^n - D]_tau > epsilon)
    double qv_se;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    // False when the L1 column increases somewhere: the sequence rule is not
    // actually approaching the base coefficients.
    bool l1_nonincreasing = true;
};

// Full-horizon study (tau = T on every path).
ConvergenceTable run_convergence(const ConvergenceExperiment& experiment);

// tau = first merged-axis time with |D^n - D| >= stop_level, truncated at the
// horizon. stop_level = +inf reproduces run_convergence bit for bit.
ConvergenceTable stopped_variant(const ConvergenceExperiment& experiment,
                                 double stop_level);

}  // namespace minpen
