#include "mrcmix/distributions.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "mrcmix/special.hpp"

namespace mrcmix {

namespace {

std::atomic<std::uint64_t> g_clamp_warnings{0};

double clamp_probability(double x) {
    if (x < 0.0) {
        if (x < -1e-9) g_clamp_warnings.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    if (x > 1.0) {
        if (x > 1.0 + 1e-9) g_clamp_warnings.fetch_add(1, std::memory_order_relaxed);
        return 1.0;
    }
    return x;
}

} // namespace

std::uint64_t clamp_warning_count() noexcept {
    return g_clamp_warnings.load(std::memory_order_relaxed);
}

void reset_clamp_warnings() noexcept {
    g_clamp_warnings.store(0, std::memory_order_relaxed);
}

double cdf_U(double u, int n, double C, double alpha) {
    if (n < 0) throw std::invalid_argument("cdf_U: negative antenna count");
    if (!(u >= 0.0)) throw std::domain_error("cdf_U requires u >= 0");
    if (n == 0) return u > 0.0 ? 1.0 : 0.0;  // U_0 is identically zero
    if (u == 0.0) return 0.0;

    // Alternating series over derivative orders; the m = 0 term is the
    // plain exponential (zeroth derivative).
    double sum = 0.0;
    double u_pow_over_mfact = 1.0;  // u^m / m!
    double sign = 1.0;
    for (int m = 0; m < n; ++m) {
        if (m > 0) {
            u_pow_over_mfact *= u / static_cast<double>(m);
            sign = -sign;
        }
        sum += sign * u_pow_over_mfact * exp_term_derivative(m, C, alpha, u);
    }
    return clamp_probability(1.0 - sum);
}

double cdf_V(double v, double C, double alpha) {
    if (!(v >= 0.0)) throw std::domain_error("cdf_V requires v >= 0");
    if (v == 0.0) return 0.0;
    return clamp_probability(-std::expm1(-C * std::pow(v, 2.0 / alpha)));
}

double pdf_V(double v, double C, double alpha) {
    if (!(v > 0.0))
        throw std::domain_error("pdf_V requires v > 0 (singular but integrable at 0)");
    const double b = 2.0 / alpha;
    return C * b * std::pow(v, b - 1.0) * std::exp(-C * std::pow(v, b));
}

double sample_V(double u01, double C, double alpha) {
    if (!(u01 >= 0.0 && u01 < 1.0))
        throw std::domain_error("sample_V requires a uniform variate in [0, 1)");
    return std::pow(-std::log1p(-u01) / C, 0.5 * alpha);
}

} // namespace mrcmix
