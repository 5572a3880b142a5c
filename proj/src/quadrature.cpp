#include "minpen/quadrature.hpp"

#include <limits>

namespace minpen {

namespace {

struct Diverged {};

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double eval(const std::function<double(double)>& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw Diverged{};
    return v;
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol,
             int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(f, lm);
    const double frm = eval(f, rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
    if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
    if (a == b) return 0.0;
    try {
        const double fa = eval(f, a);
        const double fb = eval(f, b);
        const double fm = eval(f, 0.5 * (a + b));
        const double whole = simpson(fa, fm, fb, b - a);
        return adapt(f, a, b, fa, fm, fb, whole, tol, max_depth);
    } catch (const Diverged&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace minpen
