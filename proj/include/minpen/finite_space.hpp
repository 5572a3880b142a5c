#pragma once

#include <string>
#include <vector>

namespace minpen {

class Position;

// Finite probability space: labelled atoms with nonnegative weights summing
// to one. Atoms with zero weight are kept (null sets matter for absolute
// continuity) but excluded from the support.
class FiniteSpace {
  public:
    FiniteSpace(std::vector<std::string> labels, std::vector<double> weights);

    std::size_t size() const { return weights_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<double>& weights() const { return weights_; }
    double weight(std::size_t i) const { return weights_[i]; }
    // Indices of atoms with strictly positive weight.
    const std::vector<std::size_t>& support() const { return support_; }

    double expectation(const Position& x) const;

    static FiniteSpace uniform(std::size_t n);

  private:
    std::vector<std::string> labels_;
    std::vector<double> weights_;
    std::vector<std::size_t> support_;
};

// Bounded payoff profile over the atoms; entries must be finite.
class Position {
  public:
    Position(const FiniteSpace& space, std::vector<double> payoffs);

    const std::vector<double>& payoffs() const { return payoffs_; }
    double operator[](std::size_t i) const { return payoffs_[i]; }
    std::size_t size() const { return payoffs_.size(); }

  private:
    std::vector<double> payoffs_;
};

// Density dQ/dP of a measure Q absolutely continuous w.r.t. the space's
// weights: nonnegative values with sum(value_i * weight_i) = 1, and zero on
// null atoms (a positive value on a null atom is rejected at construction).
class DensityVector {
  public:
    DensityVector(const FiniteSpace& space, std::vector<double> values);

    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    // E_Q[X] = sum_i weight_i * value_i * x_i
    double expectation(const FiniteSpace& space, const Position& x) const;

    // Build from atom probabilities q_i (must vanish on null atoms).
    static DensityVector from_probabilities(const FiniteSpace& space,
                                            const std::vector<double>& q);
    static DensityVector uniform(const FiniteSpace& space);

  private:
    std::vector<double> values_;
};

// Total variation distance: half the weighted L1 distance of the densities.
double total_variation_distance(const FiniteSpace& space, const DensityVector& a,
                                const DensityVector& b);
// Weighted L1 distance E_P|Z_a - Z_b| (total variation is half of this).
double l1_distance(const FiniteSpace& space, const DensityVector& a,
                   const DensityVector& b);

}  // namespace minpen
