#include "mrcmix/params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace mrcmix {

void SystemParams::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::domain_error("lambda must be a finite nonnegative density");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("ALOHA probability p must lie in [0, 1]");
    if (!(alpha > 2.0) || !std::isfinite(alpha))
        throw std::domain_error("path-loss exponent alpha must exceed 2");
    if (!(d > 0.0) || !std::isfinite(d))
        throw std::domain_error("serving distance d must be positive");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw std::domain_error("path-loss regularizer epsilon must be nonnegative");
}

void MixtureConfig::validate() const {
    if (antennas < 1)
        throw std::domain_error("antenna count must be at least 1");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::domain_error("mixture weight q must lie in [0, 1]");
}

double constant_C(double lambda_p, double alpha) {
    if (!(alpha > 2.0))
        throw std::domain_error("constant_C requires alpha > 2");
    if (!(lambda_p > 0.0))
        throw std::domain_error("constant_C requires a positive interferer intensity");
    const double pi = std::numbers::pi;
    return 2.0 * pi * pi * lambda_p / (alpha * std::sin(2.0 * pi / alpha));
}

double constant_B(double lambda_p, double d, double T_linear, double alpha) {
    if (!(alpha > 2.0))
        throw std::domain_error("constant_B requires alpha > 2");
    if (!(d > 0.0))
        throw std::domain_error("constant_B requires a positive distance");
    if (!(T_linear >= 0.0))
        throw std::domain_error("constant_B requires a nonnegative linear threshold");
    if (T_linear == 0.0 || lambda_p == 0.0) return 0.0;
    return constant_C(lambda_p, alpha) * d * d * std::pow(T_linear, 2.0 / alpha);
}

DerivedConstants derived_constants(const SystemParams& params, double T_linear) {
    params.validate();
    return {constant_C(params.intensity(), params.alpha),
            constant_B(params.intensity(), params.d, T_linear, params.alpha)};
}

double SimConfig::resolved_half_width(double lambda_p) const {
    if (window_half_width) {
        if (!(*window_half_width > 0.0))
            throw std::domain_error("window half-width must be positive");
        return *window_half_width;
    }
    // AUTO: (2L)^2 * lambda_p = 1e3, i.e. 1000 interferers on average.
    if (lambda_p <= 0.0) return 1.0;  // empty process; any finite window works
    return 0.5 * std::sqrt(1e3 / lambda_p);
}

int SimConfig::resolved_workers() const {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void SimConfig::validate() const {
    if (trials < 1) throw std::domain_error("trial count must be positive");
    if (workers < 0) throw std::domain_error("worker count cannot be negative");
    if (window_half_width && !(*window_half_width > 0.0))
        throw std::domain_error("window half-width must be positive");
}

} // namespace mrcmix
