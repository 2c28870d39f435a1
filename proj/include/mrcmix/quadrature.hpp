#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "mrcmix/errors.hpp"

namespace mrcmix {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
};

namespace detail {

// Gauss-Kronrod 7-15 node/weight pair on [-1, 1].
inline constexpr double gk_nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double gk_weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double gauss_weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
QuadResult gk15_panel(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f_center = f(center);
    double kronrod = gk_weights[7] * f_center;
    double gauss = gauss_weights[3] * f_center;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * gk_nodes[i];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += gk_weights[i] * fsum;
        if (i % 2 == 1) gauss += gauss_weights[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;

    // QUADPACK-style error sharpening of |K15 - G7|.
    double err = std::abs(kronrod - gauss);
    err = 200.0 * err;
    err = std::min(err * std::sqrt(err) / 200.0, std::abs(kronrod - gauss) * 200.0);
    if (!std::isfinite(err)) err = std::abs(kronrod - gauss) * 200.0;
    return {kronrod, err};
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

} // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b]. Splits the panel
// with the largest error estimate until sum(err) <= max(abs_tol,
// rel_tol*|value|) or the subdivision budget runs out (integration_error).
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double rel_tol,
                              double abs_tol, int max_subdivisions) {
    if (a == b) return {0.0, 0.0};

    std::priority_queue<detail::Panel> panels;
    auto first = detail::gk15_panel(f, a, b);
    panels.push({a, b, first.value, first.abs_error});
    double total_value = first.value;
    double total_error = first.abs_error;

    int splits = 0;
    while (total_error > std::max(abs_tol, rel_tol * std::abs(total_value))) {
        if (splits >= max_subdivisions) {
            throw integration_error(
                "adaptive quadrature exhausted its subdivision budget",
                std::max(abs_tol, rel_tol * std::abs(total_value)), total_error);
        }
        detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval at floating-point resolution; keep its estimate
            // but stop counting its error against the budget.
            total_error -= worst.error;
            panels.push({worst.a, worst.b, worst.value, 0.0});
            continue;
        }
        auto left = detail::gk15_panel(f, worst.a, mid);
        auto right = detail::gk15_panel(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.abs_error + right.abs_error - worst.error;
        panels.push({worst.a, mid, left.value, left.abs_error});
        panels.push({mid, worst.b, right.value, right.abs_error});
        ++splits;
    }
    return {total_value, total_error};
}

} // namespace mrcmix
