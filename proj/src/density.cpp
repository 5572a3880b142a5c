#include "minpen/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "minpen/quadrature.hpp"

namespace minpen {

double DensityPath::value_at(double t) const {
    if (times.empty() || t < times.front() - 1e-12)
        throw std::invalid_argument("DensityPath::value_at: time out of range");
    auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t idx = static_cast<std::size_t>(it - times.begin());
    return values[idx == 0 ? 0 : idx - 1];
}

DensityPath stochastic_exponential(const LevyPath& path,
                                   const GirsanovCoefficients& theta) {
    if (path.horizon() > theta.horizon() + 1e-9)
        throw std::invalid_argument(
            "stochastic_exponential: path outruns the coefficient horizon");

    DensityPath d;
    const std::size_t points = path.times.size() + path.jumps.size();
    d.times.reserve(points);
    d.values.reserve(points);
    d.log_brownian.reserve(points);
    d.log_quadratic.reserve(points);
    d.log_compensator.reserve(points);
    d.log_jump.reserve(points);

    double p_brownian = 0.0, p_quadratic = 0.0, p_compensator = 0.0,
           p_jump = 0.0;
    bool killed = false;
    double last_time = 0.0;

    auto push = [&](double t) {
        d.times.push_back(t);
        d.values.push_back(
            killed ? 0.0
                   : std::exp(p_brownian + p_quadratic + p_compensator + p_jump));
        d.log_brownian.push_back(p_brownian);
        d.log_quadratic.push_back(p_quadratic);
        d.log_compensator.push_back(p_compensator);
        d.log_jump.push_back(p_jump);
    };

    push(0.0);

    std::size_t k = 1;  // next grid point
    std::size_t j = 0;  // next jump
    while (k < path.times.size() || j < path.jumps.size()) {
        const double t_grid = k < path.times.size() ? path.times[k] : infinity;
        const double t_jump = j < path.jumps.size() ? path.jumps[j].time : infinity;
        const double t = std::min(t_grid, t_jump);
        const bool is_grid = t_grid <= t_jump;
        const bool is_jump = t_jump <= t_grid;

        // Deterministic integrals advance with the left-endpoint rule; after
        // the kill the coefficients count as zero and the parts stay frozen.
        if (!killed && t > last_time) {
            const double dt = t - last_time;
            const double th0 = theta.theta0(last_time);
            p_quadratic -= 0.5 * th0 * th0 * dt;
            double comp = 0.0;
            for (const JumpAtom& a : theta.atoms())
                comp += theta.theta1(last_time, a.size) * a.rate;
            p_compensator -= comp * dt;
        }
        last_time = t;

        // The Brownian integral is a left-point Ito sum on the path grid.
        if (is_grid && !killed && path.has_brownian) {
            const double dw = path.brownian[k] - path.brownian[k - 1];
            p_brownian += theta.theta0(path.times[k - 1]) * dw;
        }

        if (is_jump) {
            const JumpEvent& ev = path.jumps[j];
            const double left =
                killed ? 0.0
                       : std::exp(p_brownian + p_quadratic + p_compensator +
                                  p_jump);
            d.jump_points.push_back(d.times.size());
            d.jump_left_values.push_back(left);
            if (!killed) {
                const double g = 1.0 + theta.theta1(t, ev.size);
                if (g <= 0.0) {  // theta1 = -1: the density dies here
                    killed = true;
                    d.tau0 = t;
                } else {
                    p_jump += std::log(g);
                }
            }
            ++j;
        }
        if (is_grid) ++k;
        push(t);
    }
    return d;
}

MonteCarloEstimate martingale_check(const LevyTriplet& model,
                                    const GirsanovCoefficients& theta, double t,
                                    std::size_t steps, std::size_t n_paths,
                                    RngStream rng) {
    if (!(t > 0.0) || t > theta.horizon() + 1e-9)
        throw std::invalid_argument("martingale_check: t outside (0, horizon]");
    if (n_paths < 2)
        throw std::invalid_argument("martingale_check: need at least 2 paths");
    Accumulator acc;
    for (std::size_t i = 0; i < n_paths; ++i) {
        const LevyPath path = simulate_path(model, t, steps, rng.advanced(i));
        acc.add(stochastic_exponential(path, theta).terminal());
    }
    return acc.estimate();
}

MonteCarloEstimate reweighted_expectation(
    const std::vector<LevyPath>& paths, const std::vector<DensityPath>& densities,
    const std::function<double(const LevyPath&)>& f) {
    if (paths.size() != densities.size() || paths.empty())
        throw std::invalid_argument(
            "reweighted_expectation: paths/densities mismatch");
    Accumulator acc;
    for (std::size_t i = 0; i < paths.size(); ++i)
        acc.add(densities[i].terminal() * f(paths[i]));
    return acc.estimate();
}

CompensatorCheck compensator_check(const LevyTriplet& model,
                                   const GirsanovCoefficients& theta,
                                   std::size_t atom_index, std::size_t steps,
                                   std::size_t n_paths, RngStream rng) {
    if (atom_index >= model.atoms().size())
        throw std::invalid_argument("compensator_check: unknown atom index");
    if (n_paths < 2)
        throw std::invalid_argument("compensator_check: need at least 2 paths");
    const double horizon = theta.horizon();
    const JumpAtom& atom = model.atoms()[atom_index];

    Accumulator acc;
    for (std::size_t i = 0; i < n_paths; ++i) {
        const LevyPath path = simulate_path(model, horizon, steps, rng.advanced(i));
        const DensityPath d = stochastic_exponential(path, theta);
        acc.add(d.terminal() * static_cast<double>(path.jump_count(atom_index)) /
                horizon);
    }
    const double tilt = integrate(
        [&](double t) { return 1.0 + theta.theta1(t, atom.size); }, 0.0, horizon,
        1e-10);
    return {acc.mean(), atom.rate * tilt / horizon, acc.standard_error()};
}

namespace {

void require_same_axis(const DensityPath& a, const DensityPath& b) {
    if (a.times.size() != b.times.size() ||
        a.jump_points.size() != b.jump_points.size() ||
        !std::equal(a.times.begin(), a.times.end(), b.times.begin()))
        throw std::invalid_argument(
            "quadratic_variation_diff: densities from different paths");
}

}  // namespace

double quadratic_variation_diff_until(const DensityPath& a, const DensityPath& b,
                                      const GirsanovCoefficients& theta_a,
                                      const GirsanovCoefficients& theta_b,
                                      const LevyPath& path, double t_stop) {
    require_same_axis(a, b);
    double qv = 0.0;
    if (path.has_brownian) {
        for (std::size_t i = 0; i + 1 < a.times.size(); ++i) {
            const double t0 = a.times[i];
            if (t0 >= t_stop) break;
            const double t1 = std::min(a.times[i + 1], t_stop);
            const double w =
                a.values[i] * theta_a.theta0(t0) - b.values[i] * theta_b.theta0(t0);
            qv += w * w * (t1 - t0);
        }
    }
    for (std::size_t j = 0; j < path.jumps.size(); ++j) {
        const JumpEvent& ev = path.jumps[j];
        if (ev.time > t_stop) break;
        const double v = a.jump_left_values[j] * theta_a.theta1(ev.time, ev.size) -
                         b.jump_left_values[j] * theta_b.theta1(ev.time, ev.size);
        qv += v * v;
    }
    return qv;
}

double quadratic_variation_diff(const DensityPath& a, const DensityPath& b,
                                const GirsanovCoefficients& theta_a,
                                const GirsanovCoefficients& theta_b,
                                const LevyPath& path) {
    return quadratic_variation_diff_until(a, b, theta_a, theta_b, path,
                                          path.horizon());
}

}  // namespace minpen
