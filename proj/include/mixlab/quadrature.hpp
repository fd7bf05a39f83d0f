#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace mixlab {

namespace detail {

template <typename Fn>
double adaptive_simpson_rec(const Fn& f, double a, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth, int force) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) throw std::runtime_error("adaptive_simpson: recursion limit reached");
    if (force <= 0 && std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, force - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, force - 1);
}

} // namespace detail

// Adaptive Simpson quadrature with absolute tolerance. Used as the
// construction-independent oracle for integrals with closed-form targets.
// The first `min_depth` levels always subdivide, so localized or
// sign-symmetric integrands cannot fool the error estimate at the root.
template <typename Fn>
double adaptive_simpson(Fn&& f, double a, double b, double abs_tol = 1e-12,
                        int max_depth = 48, int min_depth = 6) {
    if (!(b >= a)) throw std::invalid_argument("adaptive_simpson: b < a");
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth,
                                        min_depth);
}

// Composite Simpson on n uniform intervals (n even). Deterministic cost,
// used where the integrand is cheap and smooth.
template <typename Fn>
double composite_simpson(Fn&& f, double a, double b, int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("composite_simpson: n must be even, >= 2");
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace mixlab
