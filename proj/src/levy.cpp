#include "minpen/levy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace minpen {

LevyTriplet::LevyTriplet(double drift, bool brownian, std::vector<JumpAtom> atoms)
    : drift_(drift), brownian_(brownian), atoms_(std::move(atoms)) {
    if (!std::isfinite(drift_))
        throw std::invalid_argument("LevyTriplet: drift must be finite");
    std::set<double> sizes;
    total_rate_ = 0.0;
    compensated_drift_ = 0.0;
    for (const JumpAtom& a : atoms_) {
        if (!std::isfinite(a.size) || a.size == 0.0)
            throw std::invalid_argument("LevyTriplet: atom sizes must be nonzero");
        if (!std::isfinite(a.rate) || a.rate < 0.0)
            throw std::invalid_argument("LevyTriplet: atom rates must be >= 0");
        if (!sizes.insert(a.size).second)
            throw std::invalid_argument("LevyTriplet: duplicate atom sizes");
        total_rate_ += a.rate;
        if (std::abs(a.size) <= 1.0) compensated_drift_ += a.size * a.rate;
    }
}

double LevyTriplet::expected_level(double horizon) const {
    double big = 0.0;
    for (const JumpAtom& a : atoms_)
        if (std::abs(a.size) > 1.0) big += a.size * a.rate;
    return (drift_ + big) * horizon;
}

std::size_t LevyPath::jump_count(std::size_t atom) const {
    std::size_t n = 0;
    for (const JumpEvent& j : jumps) n += j.atom == atom ? 1 : 0;
    return n;
}

LevyPath simulate_path(const LevyTriplet& model, double horizon,
                       std::size_t steps, RngStream stream) {
    if (!(horizon > 0.0))
        throw std::invalid_argument("simulate_path: horizon must be > 0");
    if (steps < 1) throw std::invalid_argument("simulate_path: steps must be >= 1");

    std::mt19937_64 gen = stream.engine();
    const double dt = horizon / static_cast<double>(steps);

    LevyPath path;
    path.has_brownian = model.has_brownian();
    path.times.resize(steps + 1);
    path.brownian.assign(steps + 1, 0.0);
    for (std::size_t k = 0; k <= steps; ++k)
        path.times[k] = horizon * static_cast<double>(k) / steps;
    path.times[steps] = horizon;

    if (model.has_brownian()) {
        std::normal_distribution<double> normal(0.0, std::sqrt(dt));
        for (std::size_t k = 1; k <= steps; ++k)
            path.brownian[k] = path.brownian[k - 1] + normal(gen);
    }

    const double lambda = model.total_rate();
    if (lambda > 0.0) {
        std::poisson_distribution<long> count(lambda * horizon);
        const long n = count(gen);
        std::uniform_real_distribution<double> uniform(0.0, horizon);
        std::vector<double> times(n);
        for (long i = 0; i < n; ++i)
            times[i] = horizon - uniform(gen);  // lands in (0, horizon]
        std::vector<std::size_t> atoms(n);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (long i = 0; i < n; ++i) {
            const double u = unit(gen) * lambda;
            double acc = 0.0;
            std::size_t pick = model.atoms().size() - 1;
            for (std::size_t a = 0; a < model.atoms().size(); ++a) {
                acc += model.atoms()[a].rate;
                if (u < acc) {
                    pick = a;
                    break;
                }
            }
            atoms[i] = pick;
        }
        std::vector<long> order(n);
        for (long i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](long a, long b) { return times[a] < times[b]; });
        double prev = 0.0;
        for (long i : order) {
            double t = times[i];
            if (t <= prev)  // measure-zero tie; keep times strictly increasing
                t = std::nextafter(prev, horizon * 2.0);
            prev = t;
            path.jumps.push_back({t, model.atoms()[atoms[i]].size, atoms[i]});
        }
    }

    // Level: drift + compensation of small jumps + Brownian + jumps so far.
    const double eff_drift = model.drift() - model.compensated_drift();
    std::size_t next_jump = 0;
    double jump_sum = 0.0;
    path.level.resize(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = path.times[k];
        while (next_jump < path.jumps.size() && path.jumps[next_jump].time <= t)
            jump_sum += path.jumps[next_jump++].size;
        path.level[k] = eff_drift * t + path.brownian[k] + jump_sum;
    }
    return path;
}

std::vector<LevyPath> simulate_batch(const LevyTriplet& model, double horizon,
                                     std::size_t steps, std::size_t n_paths,
                                     RngStream base) {
    std::vector<LevyPath> paths;
    paths.reserve(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i)
        paths.push_back(simulate_path(model, horizon, steps, base.advanced(i)));
    return paths;
}

double empirical_compensator(const std::vector<LevyPath>& paths,
                             std::size_t atom_index, const LevyTriplet& model) {
    if (paths.empty())
        throw std::invalid_argument("empirical_compensator: no paths");
    if (atom_index >= model.atoms().size())
        throw std::invalid_argument("empirical_compensator: unknown atom index");
    const double horizon = paths.front().horizon();
    std::size_t total = 0;
    for (const LevyPath& p : paths) {
        if (std::abs(p.horizon() - horizon) > 1e-12)
            throw std::invalid_argument(
                "empirical_compensator: mixed horizons");
        total += p.jump_count(atom_index);
    }
    return static_cast<double>(total) /
           (static_cast<double>(paths.size()) * horizon);
}

}  // namespace minpen
