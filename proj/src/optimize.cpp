#include "minpen/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace minpen {

namespace {
constexpr double neg_inf = -std::numeric_limits<double>::infinity();
}

SearchPoint nelder_mead_max(const Objective& f, const std::vector<double>& start,
                            double initial_step, int max_iter, double f_tol) {
    const std::size_t d = start.size();
    if (d == 0) throw std::invalid_argument("nelder_mead_max: empty start");

    // Build the initial simplex; flip a vertex direction if it lands
    // infeasible so we start from a usable configuration where possible.
    std::vector<SearchPoint> simplex;
    simplex.push_back({start, f(start)});
    if (simplex[0].value == neg_inf)
        throw std::invalid_argument("nelder_mead_max: infeasible start");
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> v = start;
        v[i] += initial_step;
        double fv = f(v);
        if (fv == neg_inf) {
            v[i] = start[i] - initial_step;
            fv = f(v);
        }
        simplex.push_back({std::move(v), fv});
    }

    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const SearchPoint& a, const SearchPoint& b) {
                             return a.value > b.value;
                         });
    };
    order();

    for (int it = 0; it < max_iter; ++it) {
        if (simplex.front().value - simplex.back().value <= f_tol &&
            simplex.back().value != neg_inf)
            break;

        // Centroid of all but the worst vertex.
        std::vector<double> c(d, 0.0);
        for (std::size_t i = 0; i < d + 1; ++i) {
            if (i + 1 == simplex.size()) continue;
            for (std::size_t j = 0; j < d; ++j) c[j] += simplex[i].x[j];
        }
        for (double& cj : c) cj /= static_cast<double>(d);

        const SearchPoint& worst = simplex.back();
        auto along = [&](double t) {
            std::vector<double> p(d);
            for (std::size_t j = 0; j < d; ++j)
                p[j] = c[j] + t * (c[j] - worst.x[j]);
            return p;
        };

        std::vector<double> xr = along(1.0);
        const double fr = f(xr);
        if (fr > simplex.front().value) {
            std::vector<double> xe = along(2.0);
            const double fe = f(xe);
            if (fe > fr)
                simplex.back() = {std::move(xe), fe};
            else
                simplex.back() = {std::move(xr), fr};
        } else if (fr > simplex[d - 1].value) {
            simplex.back() = {std::move(xr), fr};
        } else {
            const double t = fr > worst.value ? 0.5 : -0.5;
            std::vector<double> xc = along(t);
            const double fc = f(xc);
            if (fc > std::max(fr, worst.value)) {
                simplex.back() = {std::move(xc), fc};
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 1; i < simplex.size(); ++i) {
                    for (std::size_t j = 0; j < d; ++j)
                        simplex[i].x[j] =
                            simplex[0].x[j] + 0.5 * (simplex[i].x[j] - simplex[0].x[j]);
                    simplex[i].value = f(simplex[i].x);
                }
            }
        }
        order();
    }
    return simplex.front();
}

SearchPoint grid_scan_max(const Objective& f, const std::vector<double>& center,
                          const std::vector<double>& half_width, int resolution) {
    const std::size_t d = center.size();
    if (half_width.size() != d)
        throw std::invalid_argument("grid_scan_max: dimension mismatch");
    if (resolution < 1) throw std::invalid_argument("grid_scan_max: resolution < 1");

    SearchPoint best{{}, neg_inf};
    std::vector<int> idx(d, 0);
    std::vector<double> x(d);
    while (true) {
        for (std::size_t j = 0; j < d; ++j) {
            x[j] = resolution == 1
                       ? center[j]
                       : center[j] - half_width[j] +
                             2.0 * half_width[j] * idx[j] / (resolution - 1);
        }
        const double v = f(x);
        if (v > best.value) best = {x, v};

        std::size_t k = 0;
        while (k < d && ++idx[k] == resolution) idx[k++] = 0;
        if (k == d) break;
    }
    return best;
}

BoxSearchResult box_search_max(const Objective& f, const std::vector<double>& center,
                               const std::vector<double>& half_width, int resolution,
                               int shrink_levels, bool polish, int polish_iter) {
    SearchPoint best = grid_scan_max(f, center, half_width, resolution);
    double last_gain = 0.0;

    std::vector<double> half = half_width;
    for (int level = 0; level < shrink_levels; ++level) {
        for (double& h : half) h *= 0.5;
        const SearchPoint refined = grid_scan_max(f, best.x, half, resolution);
        last_gain = std::max(0.0, refined.value - best.value);
        if (refined.value > best.value) best = refined;
    }
    if (polish && !best.x.empty()) {
        const double step =
            0.5 * *std::max_element(half.begin(), half.end());
        const SearchPoint polished =
            nelder_mead_max(f, best.x, std::max(step, 1e-9), polish_iter);
        if (polished.value > best.value) best = polished;
        // Confirmation stage: a grid around the incumbent at the final cell
        // size. Its gain is ~0 when the polish settled on a local max, so it
        // is the convergence signal the callers read off last_gain.
        const SearchPoint confirm = grid_scan_max(f, best.x, half, resolution);
        last_gain = std::max(0.0, confirm.value - best.value);
        if (confirm.value > best.value) best = confirm;
    }
    return {best.x, best.value, last_gain};
}

double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, int max_iter, double x_tol,
                          std::size_t* evaluations) {
    if (!(lo <= hi)) throw std::invalid_argument("golden_section_max: lo > hi");
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    auto call = [&](double x) {
        if (evaluations) ++*evaluations;
        return f(x);
    };
    double f1 = call(x1), f2 = call(x2);
    for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = call(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = call(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace minpen
