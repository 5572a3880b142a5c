#pragma once

#include <functional>
#include <string>

#include "minpen/finite_space.hpp"

namespace minpen {

// Penalty on densities; may return +inf (skipped by suprema, never fed to
// arithmetic). All representable DensityVectors are absolutely continuous by
// construction, so the worst-case penalty is zero on its whole domain.
struct FinitePenalty {
    std::string name;
    std::function<double(const DensityVector&)> value;

    double operator()(const DensityVector& q) const { return value(q); }
};

// Risk measure as a plain evaluator on positions.
using RiskEvaluator = std::function<double(const Position&)>;

// Relative entropy H(Q|P) = E_P[Z log Z] (0 log 0 = 0).
double relative_entropy(const FiniteSpace& space, const DensityVector& q);

// psi(Q) = 0 for every representable Q.
FinitePenalty zero_penalty();
// Same values as zero_penalty: the infinite branch (Q not << P) is not
// representable on a finite space, so only the name differs.
FinitePenalty worst_case_penalty();
// psi(Q) = (1/gamma) H(Q|P), gamma > 0.
FinitePenalty entropic_penalty(const FiniteSpace& space, double gamma);
// psi(Q) = E_Q[c] for a fixed payoff profile c.
FinitePenalty linear_penalty(const FiniteSpace& space, std::vector<double> c);

// Closed-form risk measures induced by the penalties above; used both as
// reference values and as exact evaluators for biduality searches.
RiskEvaluator worst_case_risk(const FiniteSpace& space);  // -min over support
RiskEvaluator entropic_risk(const FiniteSpace& space, double gamma);
RiskEvaluator linear_shift_risk(const FiniteSpace& space, std::vector<double> c);

}  // namespace minpen
