#include "minpen/girsanov.hpp"

#include <cmath>
#include <stdexcept>

#include "minpen/quadrature.hpp"

namespace minpen {

namespace {
// Dense deterministic audit grid for the theta1 >= -1 constraint.
constexpr int audit_points = 4097;
}

GirsanovCoefficients::GirsanovCoefficients(BrownianCoefficient theta0,
                                           JumpCoefficient theta1,
                                           const LevyTriplet& model,
                                           double horizon, std::string name)
    : theta0_(std::move(theta0)),
      theta1_(std::move(theta1)),
      horizon_(horizon),
      name_(std::move(name)),
      atoms_(model.atoms()) {
    if (!(horizon_ > 0.0))
        throw std::invalid_argument("GirsanovCoefficients: horizon must be > 0");
    if (!theta0_ || !theta1_)
        throw std::invalid_argument("GirsanovCoefficients: empty coefficient");

    for (const JumpAtom& a : model.atoms()) {
        for (int k = 0; k < audit_points; ++k) {
            const double t = horizon_ * k / (audit_points - 1.0);
            const double v = theta1_(t, a.size);
            if (!std::isfinite(v) || v < -1.0 - 1e-12)
                throw std::invalid_argument(
                    "GirsanovCoefficients: theta1 < -1 on an atom");
        }
    }

    brownian_energy_ = integrate(
        [this](double t) {
            const double v = theta0_(t);
            return v * v;
        },
        0.0, horizon_, 1e-10);
    jump_energy_ = integrate(
        [this, &model](double t) {
            double s = 0.0;
            for (const JumpAtom& a : model.atoms()) {
                const double v = theta1_(t, a.size);
                s += v * v * a.rate;
            }
            return s;
        },
        0.0, horizon_, 1e-10);
    if (!std::isfinite(brownian_energy_) || !std::isfinite(jump_energy_))
        throw std::invalid_argument(
            "GirsanovCoefficients: admissibility integral diverges");
}

GirsanovCoefficients GirsanovCoefficients::constant(double theta0, double theta1,
                                                    const LevyTriplet& model,
                                                    double horizon) {
    return GirsanovCoefficients(
        [theta0](double) { return theta0; },
        [theta1](double, double) { return theta1; }, model, horizon, "const");
}

GirsanovCoefficients GirsanovCoefficients::linear_in_time(
    double a0, double b0, double a1, double b1, const LevyTriplet& model,
    double horizon) {
    return GirsanovCoefficients(
        [a0, b0](double t) { return a0 + b0 * t; },
        [a1, b1](double t, double) { return a1 + b1 * t; }, model, horizon,
        "linear_in_t");
}

GirsanovCoefficients GirsanovCoefficients::per_atom(
    double theta0, std::vector<double> theta1_by_atom, const LevyTriplet& model,
    double horizon) {
    if (theta1_by_atom.size() != model.atoms().size())
        throw std::invalid_argument(
            "GirsanovCoefficients::per_atom: one theta1 per atom required");
    std::vector<double> sizes;
    for (const JumpAtom& a : model.atoms()) sizes.push_back(a.size);
    auto jump = [sizes, tilt = std::move(theta1_by_atom)](double, double x) {
        for (std::size_t i = 0; i < sizes.size(); ++i)
            if (sizes[i] == x) return tilt[i];
        return 0.0;  // off-atom heights are never charged
    };
    return GirsanovCoefficients([theta0](double) { return theta0; }, jump, model,
                                horizon, "per_atom");
}

}  // namespace minpen
