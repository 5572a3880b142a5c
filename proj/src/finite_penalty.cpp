#include "minpen/finite_penalty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace minpen {

double relative_entropy(const FiniteSpace& space, const DensityVector& q) {
    double h = 0.0;
    for (std::size_t i : space.support()) {
        const double z = q[i];
        if (z > 0.0) h += space.weight(i) * z * std::log(z);
    }
    return h;
}

FinitePenalty zero_penalty() {
    return {"zero", [](const DensityVector&) { return 0.0; }};
}

FinitePenalty worst_case_penalty() {
    return {"worst_case", [](const DensityVector&) { return 0.0; }};
}

FinitePenalty entropic_penalty(const FiniteSpace& space, double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("entropic_penalty: gamma must be > 0");
    return {"entropic", [space, gamma](const DensityVector& q) {
                return relative_entropy(space, q) / gamma;
            }};
}

FinitePenalty linear_penalty(const FiniteSpace& space, std::vector<double> c) {
    const Position cost(space, std::move(c));
    return {"linear", [space, cost](const DensityVector& q) {
                return q.expectation(space, cost);
            }};
}

RiskEvaluator worst_case_risk(const FiniteSpace& space) {
    return [space](const Position& x) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i : space.support()) m = std::min(m, x[i]);
        return -m;
    };
}

RiskEvaluator entropic_risk(const FiniteSpace& space, double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("entropic_risk: gamma must be > 0");
    return [space, gamma](const Position& x) {
        // (1/gamma) log E_P[exp(-gamma X)], shifted by the min for stability.
        double x_min = std::numeric_limits<double>::infinity();
        for (std::size_t i : space.support()) x_min = std::min(x_min, x[i]);
        double s = 0.0;
        for (std::size_t i : space.support())
            s += space.weight(i) * std::exp(-gamma * (x[i] - x_min));
        return -x_min + std::log(s) / gamma;
    };
}

RiskEvaluator linear_shift_risk(const FiniteSpace& space, std::vector<double> c) {
    const Position cost(space, std::move(c));
    return [space, cost](const Position& x) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i : space.support()) m = std::min(m, x[i] + cost[i]);
        return -m;
    };
}

}  // namespace minpen
