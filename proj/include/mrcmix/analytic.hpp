#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mrcmix/params.hpp"

namespace mrcmix {

enum class IntegrationMethod {
    Auto,        // quadrature up to quadrature_max_dim, sampling beyond
    Quadrature,  // nested adaptive Gauss-Kronrod over the simplex
    Sampling,    // expectation over inverse-transform draws of the V's
};

struct IntegrationPolicy {
    IntegrationMethod method = IntegrationMethod::Auto;
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
    int max_subdivisions = 200;        // per nesting level
    std::int64_t sample_count = 1'000'000;
    std::uint64_t seed = 0;            // sampling mode only
    int quadrature_max_dim = 3;        // Auto switch point
};

// P(U_n + sum_{k=1}^{N-n} V_k < s_max): the n-th term of the mixture
// outage decomposition, an (N-n)-dimensional integral over the simplex
// {v_k >= 0, sum v_k <= s_max}. n = N needs no integration and n = 0 has
// the degenerate U_0 = 0.
double w_n(int n, int antennas, double s_max, double C, double alpha,
           const IntegrationPolicy& policy = {});

// Same, but reporting the sampling standard error (zero for quadrature
// and closed-form paths).
EstimateCI w_n_detail(int n, int antennas, double s_max, double C, double alpha,
                      const IntegrationPolicy& policy = {});

// All of w_0..w_N for one (N, s_max, C, alpha); the w values do not
// depend on q, so sweeps over q reuse them.
std::vector<double> mixture_w_values(int antennas, double s_max, double C,
                                     double alpha, const IntegrationPolicy& policy = {});

// Binomial mixture combination sum_n C(N,n) q^n (1-q)^(N-n) w_n. Terms
// with zero weight are skipped, so q = 0 and q = 1 take no integration
// path at all. Verifies the weights sum to 1 within 1e-12.
double combine_w_values(std::span<const double> w_values, double q);

// Mixture-based MRC outage probability P(SIR_MRC < T) for N antennas.
double outage_mixture(const SystemParams& params, const MixtureConfig& cfg,
                      double T_linear, const IntegrationPolicy& policy = {});

// Joint SIR CCDF P(SIR_1 > T, ..., SIR_N > T) of the PPP model:
// exp(-B Gamma(N + 2/a) / ((N-1)! Gamma(1 + 2/a))).
double joint_ccdf_ppp(int antennas, double B, double alpha);

// Joint SIR CCDF of the mixture model:
// sum_n C(N,n) q^n (1-q)^(N-n) exp(-B (n^(2/a) + N - n)).
double joint_ccdf_mixture(int antennas, double q, double B, double alpha);

// Gap between the two joint CCDFs as a function of q; the tuned q is its
// root in [0, 1].
double ccdf_gap(int antennas, double q, double B, double alpha);

struct TuneResult {
    double q = 0.0;
    double q_squared = 0.0;
    double residual = 0.0;   // ccdf_gap at the returned q
    double B = 0.0;
    int sign_changes = 1;    // on the 1e-3 scan grid; >1 means the largest root was taken
};

// Tunes q so the joint SIR CCDFs of the two models match at threshold
// T_linear. Throws degenerate_input_error when B = 0 (gap identically
// zero) and no_bracket_error when f(0) and f(1) do not straddle zero.
// |residual| <= 1e-12 on success.
TuneResult tune_q(const SystemParams& params, int antennas, double T_linear);

// SIR correlation recomposed from its parts:
// zeta_inv * sqrt(Var[1/I_i] Var[1/I_j] / (Var[h_i/I_i] Var[h_j/I_j])).
double sir_correlation_identity(double var_I_inv_i, double var_I_inv_j,
                                double var_hI_inv_i, double var_hI_inv_j,
                                double zeta_inv);

} // namespace mrcmix
