#pragma once

#include <functional>
#include <vector>

namespace minpen {

using Objective = std::function<double(const std::vector<double>&)>;

struct SearchPoint {
    std::vector<double> x;
    double value;
};

// Deterministic Nelder-Mead ascent. The objective may return -inf for
// infeasible points; the initial point must be feasible. Ties never move the
// incumbent, so results are reproducible bit for bit.
SearchPoint nelder_mead_max(const Objective& f, const std::vector<double>& start,
                            double initial_step, int max_iter = 400,
                            double f_tol = 1e-12);

// Exhaustive scan of a product grid on [center_i - half_i, center_i + half_i],
// resolution points per axis (>= 1; 1 means just the center). First strict
// improvement wins, so the lowest-index grid point is kept on ties.
SearchPoint grid_scan_max(const Objective& f, const std::vector<double>& center,
                          const std::vector<double>& half_width, int resolution);

// Grid scan followed by dyadic shrinking of the box around the incumbent and
// an optional Nelder-Mead polish. `last_gain` reports the improvement from the
// final stage (with polish: a confirmation grid at the final cell size around
// the polished point), which callers use as a convergence signal.
struct BoxSearchResult {
    std::vector<double> argmax;
    double value;
    double last_gain;
};
BoxSearchResult box_search_max(const Objective& f, const std::vector<double>& center,
                               const std::vector<double>& half_width, int resolution,
                               int shrink_levels, bool polish = true,
                               int polish_iter = 400);

// Golden-section maximization of a scalar unimodal function on [lo, hi].
// Returns the midpoint of the final bracket. `evaluations` is incremented per
// objective call so callers can enforce budgets.
double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, int max_iter, double x_tol,
                          std::size_t* evaluations = nullptr);

}  // namespace minpen
