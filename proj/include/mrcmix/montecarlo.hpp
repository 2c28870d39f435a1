#pragma once

#include <array>
#include <span>
#include <vector>

#include "mrcmix/params.hpp"
#include "mrcmix/rng.hpp"

namespace mrcmix {

enum class InterferenceModel { Ppp, Mixture };

// One realization of the interference powers seen by N co-located
// antennas: a single PPP point set on [-half_width, half_width]^2,
// independent per-antenna fading on every point. Returns
// I_i = sum_x h_{x,i} / (epsilon + |x|^alpha).
std::vector<double> sample_ppp_interference(const SystemParams& params, int antennas,
                                            Xoshiro256pp& rng, double half_width);

// Outage probability P(SIR_MRC < T) of the interference-aware MRC
// receiver under the PPP model. Trials with an empty interferer set
// count as non-outage (infinite SIR).
EstimateCI simulate_mrc_outage_ppp(const SystemParams& params, int antennas,
                                   double T_linear, const SimConfig& sim);

// Same receiver under the mixture interference model: per trial, N+1
// independent interference draws J_0..J_N and per-antenna selectors that
// pick J_0 with probability q.
EstimateCI simulate_mrc_outage_mixture(const SystemParams& params, const MixtureConfig& cfg,
                                       double T_linear, const SimConfig& sim);

// Fraction of trials in which every per-antenna SIR exceeds T.
EstimateCI estimate_joint_ccdf(const SystemParams& params, int antennas, double T_linear,
                               const SimConfig& sim, InterferenceModel model, double q = 0.0);

// Threshold sweeps share one set of realizations: thresholds consume no
// randomness, so every per-threshold estimate is bit-identical to a
// single-threshold run with the same seed.
struct PppGridResult {
    std::vector<EstimateCI> outage;                        // per threshold
    std::vector<EstimateCI> joint_ccdf;                    // per threshold
    std::vector<std::vector<EstimateCI>> antenna_outage;   // [threshold][antenna]
};
PppGridResult simulate_ppp_grid(const SystemParams& params, int antennas,
                                std::span<const double> thresholds, const SimConfig& sim);

// Mixture counterpart over a (q, threshold) grid; the J draws and
// selector variates are shared across the grid the same way.
struct MixtureGridResult {
    std::vector<std::vector<EstimateCI>> outage;       // [q][threshold]
    std::vector<std::vector<EstimateCI>> joint_ccdf;   // [q][threshold]
};
MixtureGridResult simulate_mixture_grid(const SystemParams& params, int antennas,
                                        std::span<const double> q_values,
                                        std::span<const double> thresholds,
                                        const SimConfig& sim);

// Pairwise interference / SIR correlation estimates (two antennas
// suffice by exchangeability). Point estimates are pooled over all
// trials; standard errors come from 100 batch means. Trials with zero
// interference on either antenna are excluded from the inverse-moment
// statistics and counted in excluded_trials.
struct CorrelationReport {
    EstimateCI zeta;                  // Corr[I_1, I_2]
    EstimateCI zeta_inv;              // Corr[1/I_1, 1/I_2]
    EstimateCI sir_corr;              // Corr[SIR_1, SIR_2]
    std::array<EstimateCI, 2> var_I_inv;    // Var[1/I_i]
    std::array<EstimateCI, 2> var_hI_inv;   // Var[h_i/I_i]
    EstimateCI recomposition_gap;     // direct minus recomposed SIR correlation
    std::int64_t excluded_trials = 0;
    std::int64_t valid_trials = 0;
    std::int64_t trials = 0;
};
CorrelationReport estimate_correlations(const SystemParams& params, const SimConfig& sim,
                                        InterferenceModel model, double q = 0.0);

} // namespace mrcmix
