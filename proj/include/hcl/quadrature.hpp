#pragma once

#include <cmath>
#include <stdexcept>

namespace hcl {

namespace detail {

template <class F>
double simpson(const F& f, double a, double fa, double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb, double m,
                            double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double err = left + right - whole;
    if (depth <= 0 || std::fabs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Integrates f over [a, b] to absolute tolerance tol with adaptive Simpson
/// refinement (error estimate (S_left + S_right - S_whole)/15).
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-10) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw std::domain_error("adaptive_simpson: non-finite interval");
    if (a == b) return 0.0;
    if (!(tol > 0.0))
        throw std::invalid_argument("adaptive_simpson: tolerance must be positive");
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson(f, a, fa, b, fb, m, fm);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

} // namespace hcl
