#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace minpen {

// Sentinel for an infinite penalty value. Suprema skip such points instead of
// doing arithmetic with them.
inline constexpr double infinity = std::numeric_limits<double>::infinity();

inline bool is_finite(double x) { return std::isfinite(x); }

struct MonteCarloEstimate {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

// Running mean / standard-error accumulator (Welford).
class Accumulator {
  public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const {
        return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    }
    double standard_error() const {
        return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }
    MonteCarloEstimate estimate() const { return {mean(), standard_error(), n_}; }

  private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace minpen
