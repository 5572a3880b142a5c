#pragma once

#include <functional>
#include <string>
#include <vector>

#include "minpen/levy.hpp"

namespace minpen {

// Deterministic change-of-measure coefficients: theta0(t) loads the Brownian
// part, theta1(t, x) tilts the jump atom at height x. theta1 >= -1 is
// enforced on every atom at construction (theta1 = -1 kills the density at
// the first such jump). Admissibility integrals are cached.
class GirsanovCoefficients {
  public:
    using BrownianCoefficient = std::function<double(double)>;
    using JumpCoefficient = std::function<double(double, double)>;

    GirsanovCoefficients(BrownianCoefficient theta0, JumpCoefficient theta1,
                         const LevyTriplet& model, double horizon,
                         std::string name = "custom");

    double theta0(double t) const { return theta0_(t); }
    double theta1(double t, double x) const { return theta1_(t, x); }
    double horizon() const { return horizon_; }
    const std::string& name() const { return name_; }
    // Atoms of the model the coefficients were validated against.
    const std::vector<JumpAtom>& atoms() const { return atoms_; }
    // int_0^T theta0(t)^2 dt
    double brownian_energy() const { return brownian_energy_; }
    // int_0^T sum_i theta1(t, x_i)^2 rate_i dt
    double jump_energy() const { return jump_energy_; }

    static GirsanovCoefficients constant(double theta0, double theta1,
                                         const LevyTriplet& model, double horizon);
    // theta0(t) = a0 + b0 t, theta1(t, x) = a1 + b1 t
    static GirsanovCoefficients linear_in_time(double a0, double b0, double a1,
                                               double b1, const LevyTriplet& model,
                                               double horizon);
    // constant theta0 plus a per-atom constant jump tilt
    static GirsanovCoefficients per_atom(double theta0,
                                         std::vector<double> theta1_by_atom,
                                         const LevyTriplet& model, double horizon);

  private:
    BrownianCoefficient theta0_;
    JumpCoefficient theta1_;
    double horizon_;
    std::string name_;
    std::vector<JumpAtom> atoms_;
    double brownian_energy_;
    double jump_energy_;
};

}  // namespace minpen
