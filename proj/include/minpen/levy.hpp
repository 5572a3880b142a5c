#pragma once

#include <cstddef>
#include <vector>

#include "minpen/rng.hpp"

namespace minpen {

struct JumpAtom {
    double size;  // jump height, nonzero
    double rate;  // Poisson intensity, >= 0
};

// Finite-activity triplet: drift, optional unit-variance Brownian part, and a
// purely atomic jump measure. Jumps with |size| <= 1 are compensated in the
// level decomposition, matching the usual truncation convention.
class LevyTriplet {
  public:
    LevyTriplet(double drift, bool brownian, std::vector<JumpAtom> atoms);

    double drift() const { return drift_; }
    bool has_brownian() const { return brownian_; }
    const std::vector<JumpAtom>& atoms() const { return atoms_; }
    double total_rate() const { return total_rate_; }
    // sum of size * rate over the compensated (|size| <= 1) atoms
    double compensated_drift() const { return compensated_drift_; }
    // E[L_T] = (drift + sum_{|size|>1} size * rate) * T
    double expected_level(double horizon) const;

  private:
    double drift_;
    bool brownian_;
    std::vector<JumpAtom> atoms_;
    double total_rate_;
    double compensated_drift_;
};

struct JumpEvent {
    double time;
    double size;
    std::size_t atom;
};

struct LevyPath {
    std::vector<double> times;     // uniform grid 0..horizon
    std::vector<double> brownian;  // W at grid times (zeros if disabled)
    std::vector<double> level;     // L at grid times, jumps up to t included
    std::vector<JumpEvent> jumps;  // strictly increasing times
    bool has_brownian = false;

    double horizon() const { return times.back(); }
    std::size_t jump_count(std::size_t atom) const;
};

// Draw order per path: Brownian increments (steps draws), then the jump
// count, then jump times, then atom picks. Identical streams reproduce the
// path bit for bit.
LevyPath simulate_path(const LevyTriplet& model, double horizon,
                       std::size_t steps, RngStream stream);

std::vector<LevyPath> simulate_batch(const LevyTriplet& model, double horizon,
                                     std::size_t steps, std::size_t n_paths,
                                     RngStream base);

// Jumps of one atom per unit of (path, time): estimates the P-compensator
// rate. All paths must share the same horizon.
double empirical_compensator(const std::vector<LevyPath>& paths,
                             std::size_t atom_index, const LevyTriplet& model);

}  // namespace minpen
