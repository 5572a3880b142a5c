#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace minpen {

// Adaptive Simpson quadrature. Returns +inf if the integrand is non-finite
// anywhere it is sampled (divergence sentinel); throws on invalid bounds.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10, int max_depth = 40);

}  // namespace minpen
