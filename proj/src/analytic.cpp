#include "mrcmix/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mrcmix/distributions.hpp"
#include "mrcmix/errors.hpp"
#include "mrcmix/quadrature.hpp"
#include "mrcmix/rng.hpp"
#include "mrcmix/rootfind.hpp"
#include "mrcmix/special.hpp"

namespace mrcmix {

namespace {

// The cdf_U factor of the integrand at remaining budget s. Values below
// 1e-300 are treated as the (measure-zero) simplex boundary.
double bracket_term(double s, int n, double C, double alpha) {
    if (s <= 1e-300) return 0.0;
    if (n == 0) return 1.0;
    return cdf_U(s, n, C, alpha);
}

// Nested adaptive quadrature over the simplex {v_k >= 0, sum v_k <= s_max}
// in the per-coordinate substitution t_k = v_k^(2/alpha), under which each
// V-factor becomes C exp(-C t_k) dt_k and the integrand is smooth.
double simplex_quadrature(int levels_left, double budget, int n, double C,
                          double alpha, const IntegrationPolicy& policy) {
    if (levels_left == 0) return bracket_term(budget, n, C, alpha);
    if (budget <= 1e-300) return 0.0;

    const double b = 2.0 / alpha;
    const double upper = std::pow(budget, b);
    auto level_integrand = [&](double t) {
        const double spent = std::pow(t, alpha * 0.5);
        return C * std::exp(-C * t) *
               simplex_quadrature(levels_left - 1, budget - spent, n, C, alpha, policy);
    };
    return integrate_adaptive(level_integrand, 0.0, upper, policy.rel_tol,
                              policy.abs_tol, policy.max_subdivisions)
        .value;
}

// Expectation over inverse-transform draws of the V's. The bracket is
// already the conditional probability given the V's, so no indicator
// noise from U_n enters.
EstimateCI simplex_sampling(int dim, double s_max, int n, double C, double alpha,
                            const IntegrationPolicy& policy) {
    Xoshiro256pp rng = trial_stream(policy.seed, static_cast<std::uint64_t>(n));
    const std::int64_t count = policy.sample_count;
    long double sum = 0.0L, sum_sq = 0.0L;
    for (std::int64_t i = 0; i < count; ++i) {
        double remaining = s_max;
        for (int k = 0; k < dim; ++k) {
            remaining -= std::pow(rng.exponential() / C, 0.5 * alpha);
            if (remaining <= 0.0) break;
        }
        const double value = remaining > 0.0 ? bracket_term(remaining, n, C, alpha) : 0.0;
        sum += value;
        sum_sq += static_cast<long double>(value) * value;
    }
    const double mean = static_cast<double>(sum / count);
    double variance = 0.0;
    if (count > 1) {
        variance = static_cast<double>((sum_sq - sum * sum / count) / (count - 1));
        variance = std::max(variance, 0.0);
    }
    return {mean, std::sqrt(variance / static_cast<double>(count)), count};
}

void check_w_args(int n, int antennas, double s_max, double alpha) {
    if (antennas < 1) throw std::domain_error("w_n requires at least one antenna");
    if (n < 0 || n > antennas)
        throw std::invalid_argument("w_n requires 0 <= n <= antenna count");
    if (!(s_max > 0.0)) throw std::domain_error("w_n requires s_max > 0");
    if (!(alpha > 2.0)) throw std::domain_error("w_n requires alpha > 2");
}

} // namespace

EstimateCI w_n_detail(int n, int antennas, double s_max, double C, double alpha,
                      const IntegrationPolicy& policy) {
    check_w_args(n, antennas, s_max, alpha);
    const int dim = antennas - n;
    if (dim == 0) return {cdf_U(s_max, n, C, alpha), 0.0, 0};

    IntegrationMethod method = policy.method;
    if (method == IntegrationMethod::Auto) {
        method = dim <= policy.quadrature_max_dim ? IntegrationMethod::Quadrature
                                                  : IntegrationMethod::Sampling;
    }
    if (method == IntegrationMethod::Sampling)
        return simplex_sampling(dim, s_max, n, C, alpha, policy);

    double value = simplex_quadrature(dim, s_max, n, C, alpha, policy);
    if (value < 0.0) value = 0.0;
    if (value > 1.0) value = 1.0;
    return {value, 0.0, 0};
}

double w_n(int n, int antennas, double s_max, double C, double alpha,
           const IntegrationPolicy& policy) {
    return w_n_detail(n, antennas, s_max, C, alpha, policy).mean;
}

std::vector<double> mixture_w_values(int antennas, double s_max, double C,
                                     double alpha, const IntegrationPolicy& policy) {
    std::vector<double> values(static_cast<std::size_t>(antennas) + 1);
    for (int n = 0; n <= antennas; ++n)
        values[static_cast<std::size_t>(n)] = w_n(n, antennas, s_max, C, alpha, policy);
    return values;
}

double combine_w_values(std::span<const double> w_values, double q) {
    if (w_values.empty())
        throw std::invalid_argument("combine_w_values: empty w list");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::domain_error("combine_w_values requires q in [0, 1]");
    const int antennas = static_cast<int>(w_values.size()) - 1;
    double weight_sum = 0.0;
    double result = 0.0;
    for (int n = 0; n <= antennas; ++n) {
        const double weight = binomial(antennas, n) * std::pow(q, n) *
                              std::pow(1.0 - q, antennas - n);
        weight_sum += weight;
        if (weight == 0.0) continue;  // keeps q = 0 / q = 1 on the exact path
        result += weight * w_values[static_cast<std::size_t>(n)];
    }
    if (std::abs(weight_sum - 1.0) > 1e-12)
        throw std::logic_error("mixture weights failed to normalize");
    return result;
}

double outage_mixture(const SystemParams& params, const MixtureConfig& cfg,
                      double T_linear, const IntegrationPolicy& policy) {
    params.validate();
    cfg.validate();
    if (!(T_linear > 0.0))
        throw std::domain_error("outage_mixture requires a positive linear threshold");
    const double C = constant_C(params.intensity(), params.alpha);
    const double s_max = T_linear * std::pow(params.d, params.alpha);

    // w_n is q-free; evaluate only the terms with nonzero weight.
    double weight_sum = 0.0;
    double result = 0.0;
    for (int n = 0; n <= cfg.antennas; ++n) {
        const double weight = binomial(cfg.antennas, n) * std::pow(cfg.q, n) *
                              std::pow(1.0 - cfg.q, cfg.antennas - n);
        weight_sum += weight;
        if (weight == 0.0) continue;
        result += weight * w_n(n, cfg.antennas, s_max, C, params.alpha, policy);
    }
    if (std::abs(weight_sum - 1.0) > 1e-12)
        throw std::logic_error("mixture weights failed to normalize");
    return result;
}

double joint_ccdf_ppp(int antennas, double B, double alpha) {
    if (antennas < 1) throw std::domain_error("joint_ccdf_ppp requires N >= 1");
    if (!(B >= 0.0)) throw std::domain_error("joint_ccdf_ppp requires B >= 0");
    if (!(alpha > 2.0)) throw std::domain_error("joint_ccdf_ppp requires alpha > 2");
    const double b = 2.0 / alpha;
    const double log_factor = std::lgamma(antennas + b) - log_factorial(antennas - 1) -
                              std::lgamma(1.0 + b);
    return std::exp(-B * std::exp(log_factor));
}

double joint_ccdf_mixture(int antennas, double q, double B, double alpha) {
    if (antennas < 1) throw std::domain_error("joint_ccdf_mixture requires N >= 1");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::domain_error("joint_ccdf_mixture requires q in [0, 1]");
    if (!(B >= 0.0)) throw std::domain_error("joint_ccdf_mixture requires B >= 0");
    if (!(alpha > 2.0)) throw std::domain_error("joint_ccdf_mixture requires alpha > 2");
    const double b = 2.0 / alpha;
    double sum = 0.0;
    for (int n = 0; n <= antennas; ++n) {
        const double weight = binomial(antennas, n) * std::pow(q, n) *
                              std::pow(1.0 - q, antennas - n);
        if (weight == 0.0) continue;
        const double exponent = std::pow(static_cast<double>(n), b) +
                                static_cast<double>(antennas - n);
        sum += weight * std::exp(-B * exponent);
    }
    return sum;
}

double ccdf_gap(int antennas, double q, double B, double alpha) {
    return joint_ccdf_ppp(antennas, B, alpha) - joint_ccdf_mixture(antennas, q, B, alpha);
}

TuneResult tune_q(const SystemParams& params, int antennas, double T_linear) {
    params.validate();
    if (antennas < 1) throw std::domain_error("tune_q requires N >= 1");
    if (!(T_linear > 0.0))
        throw std::domain_error("tune_q requires a positive linear threshold");

    const double B = constant_B(params.intensity(), params.d, T_linear, params.alpha);
    if (B <= 0.0)
        throw degenerate_input_error(
            "tune_q: B = 0 makes both joint CCDFs equal 1 for every q; "
            "q is unidentifiable");

    const double ppp_term = joint_ccdf_ppp(antennas, B, params.alpha);
    auto gap = [&](double q) {
        return ppp_term - joint_ccdf_mixture(antennas, q, B, params.alpha);
    };

    const double f0 = gap(0.0);
    const double f1 = gap(1.0);
    if (!(f0 > 0.0) || !(f1 < 0.0))
        throw no_bracket_error("tune_q: gap does not change sign over [0, 1]; f(0) = " +
                                   std::to_string(f0) + ", f(1) = " + std::to_string(f1),
                               f0, f1);

    // Scan for sign changes so multiple roots cannot pass unnoticed; the
    // gap is a degree-N polynomial in q and has shown a single change in
    // every tested regime.
    constexpr int kGridSteps = 1000;
    std::vector<std::pair<double, double>> brackets;
    double prev_q = 0.0, prev_f = f0;
    for (int i = 1; i <= kGridSteps; ++i) {
        const double qi = static_cast<double>(i) / kGridSteps;
        const double fi = i == kGridSteps ? f1 : gap(qi);
        if ((prev_f > 0.0) != (fi > 0.0) || fi == 0.0)
            brackets.emplace_back(prev_q, qi);
        prev_q = qi;
        prev_f = fi;
    }

    TuneResult best{};
    best.B = B;
    best.sign_changes = static_cast<int>(brackets.size());
    for (const auto& [lo, hi] : brackets) {
        const RootResult root =
            find_root_brent(gap, lo, hi, gap(lo), gap(hi), 1e-13, 500);
        if (root.x >= best.q) {
            best.q = root.x;
            best.residual = root.fx;
        }
    }
    if (best.sign_changes > 1) {
        std::cerr << "tune_q: " << best.sign_changes
                  << " sign changes detected on the scan grid; returning the largest root q = "
                  << best.q << "\n";
    }
    best.q = std::min(std::max(best.q, 0.0), 1.0);
    best.q_squared = best.q * best.q;
    return best;
}

double sir_correlation_identity(double var_I_inv_i, double var_I_inv_j,
                                double var_hI_inv_i, double var_hI_inv_j,
                                double zeta_inv) {
    if (!(var_I_inv_i > 0.0 && var_I_inv_j > 0.0 && var_hI_inv_i > 0.0 &&
          var_hI_inv_j > 0.0))
        throw std::domain_error("sir_correlation_identity requires positive variances");
    return zeta_inv *
           std::sqrt((var_I_inv_i * var_I_inv_j) / (var_hI_inv_i * var_hI_inv_j));
}

} // namespace mrcmix
