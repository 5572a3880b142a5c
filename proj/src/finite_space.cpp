#include "minpen/finite_space.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace minpen {

FiniteSpace::FiniteSpace(std::vector<std::string> labels,
                         std::vector<double> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
    if (weights_.empty())
        throw std::invalid_argument("FiniteSpace: needs at least one atom");
    if (labels_.size() != weights_.size())
        throw std::invalid_argument("FiniteSpace: labels/weights size mismatch");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size())
        throw std::invalid_argument("FiniteSpace: duplicate atom labels");
    double sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        const double w = weights_[i];
        if (!std::isfinite(w) || w < 0.0)
            throw std::invalid_argument("FiniteSpace: weights must be >= 0");
        sum += w;
        if (w > 0.0) support_.push_back(i);
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("FiniteSpace: weights must sum to 1 (1e-12)");
    if (support_.empty())
        throw std::invalid_argument("FiniteSpace: all atoms are null");
}

FiniteSpace FiniteSpace::uniform(std::size_t n) {
    std::vector<std::string> labels;
    std::vector<double> weights;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back("w" + std::to_string(i));
        weights.push_back(1.0 / static_cast<double>(n));
    }
    return FiniteSpace(std::move(labels), std::move(weights));
}

double FiniteSpace::expectation(const Position& x) const {
    double s = 0.0;
    for (std::size_t i : support_) s += weights_[i] * x[i];
    return s;
}

Position::Position(const FiniteSpace& space, std::vector<double> payoffs)
    : payoffs_(std::move(payoffs)) {
    if (payoffs_.size() != space.size())
        throw std::invalid_argument("Position: size mismatch with space");
    for (double v : payoffs_)
        if (!std::isfinite(v))
            throw std::invalid_argument("Position: entries must be finite");
}

DensityVector::DensityVector(const FiniteSpace& space, std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.size() != space.size())
        throw std::invalid_argument("DensityVector: size mismatch with space");
    double mass = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double z = values_[i];
        if (!std::isfinite(z) || z < 0.0)
            throw std::invalid_argument("DensityVector: values must be >= 0");
        if (z > 0.0 && space.weight(i) == 0.0)
            throw std::invalid_argument(
                "DensityVector: positive value on a null atom");
        mass += z * space.weight(i);
    }
    if (std::abs(mass - 1.0) > 1e-10)
        throw std::invalid_argument(
            "DensityVector: E_P[Z] must equal 1 (1e-10)");
}

double DensityVector::expectation(const FiniteSpace& space,
                                  const Position& x) const {
    double s = 0.0;
    for (std::size_t i : space.support()) s += space.weight(i) * values_[i] * x[i];
    return s;
}

DensityVector DensityVector::from_probabilities(const FiniteSpace& space,
                                                const std::vector<double>& q) {
    if (q.size() != space.size())
        throw std::invalid_argument("from_probabilities: size mismatch");
    std::vector<double> z(q.size(), 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (space.weight(i) > 0.0)
            z[i] = q[i] / space.weight(i);
        else if (q[i] != 0.0)
            throw std::invalid_argument(
                "from_probabilities: mass on a null atom");
    }
    return DensityVector(space, std::move(z));
}

DensityVector DensityVector::uniform(const FiniteSpace& space) {
    std::vector<double> z(space.size(), 0.0);
    for (std::size_t i : space.support()) z[i] = 1.0;
    return DensityVector(space, std::move(z));
}

double l1_distance(const FiniteSpace& space, const DensityVector& a,
                   const DensityVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("l1_distance: size mismatch");
    double s = 0.0;
    for (std::size_t i : space.support())
        s += space.weight(i) * std::abs(a[i] - b[i]);
    return s;
}

double total_variation_distance(const FiniteSpace& space, const DensityVector& a,
                                const DensityVector& b) {
    return 0.5 * l1_distance(space, a, b);
}

}  // namespace minpen
