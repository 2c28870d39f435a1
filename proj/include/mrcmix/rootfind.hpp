#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace mrcmix {

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
};

// Brent's method on a bracketing interval [a, b] with f(a)*f(b) <= 0:
// bisection safeguarded by secant / inverse-quadratic steps. Iterates
// until |f| <= f_tol or the interval collapses to machine resolution.
template <class F>
RootResult find_root_brent(F&& f, double a, double b, double fa, double fb,
                           double f_tol, int max_iter = 200) {
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};
    if ((fa > 0.0) == (fb > 0.0))
        throw std::invalid_argument("find_root_brent: interval does not bracket a root");

    double c = a, fc = fa;
    double step_prev = b - a, step_prev2 = step_prev;

    int iter = 0;
    for (; iter < max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            step_prev = step_prev2 = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol_x = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 1e-300;
        const double half = 0.5 * (c - b);
        if (std::abs(fb) <= f_tol || std::abs(half) <= tol_x) break;

        if (std::abs(step_prev2) >= tol_x && std::abs(fa) > std::abs(fb)) {
            // Try interpolation: secant, or inverse quadratic when distinct.
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * half * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q; else p = -p;
            if (2.0 * p < std::min(3.0 * half * q - std::abs(tol_x * q), std::abs(step_prev2 * q))) {
                step_prev2 = step_prev;
                step_prev = p / q;
            } else {
                step_prev = half;
                step_prev2 = half;
            }
        } else {
            step_prev = half;
            step_prev2 = half;
        }
        a = b;
        fa = fb;
        b += (std::abs(step_prev) > tol_x) ? step_prev : (half > 0.0 ? tol_x : -tol_x);
        fb = f(b);
        if (fb == 0.0) break;
    }
    return {b, fb, iter};
}

} // namespace mrcmix
