#pragma once

#include <cstdint>
#include <optional>

namespace mrcmix {

// Network geometry and channel parameters of the Poisson dipole model.
// Transmitters form a homogeneous PPP of intensity lambda on the plane;
// each transmits with ALOHA probability p, so the active interferer set
// has intensity lambda*p. The typical receiver sits at the origin with
// its serving transmitter at distance d. Path loss is 1/(epsilon + r^alpha).
struct SystemParams {
    double lambda = 1e-4;  // transmitters per m^2
    double p = 1.0;        // ALOHA transmit probability, in [0, 1]
    double alpha = 4.0;    // path-loss exponent, must exceed 2
    double d = 10.0;       // serving-link distance in m
    double epsilon = 0.0;  // path-loss regularizer (0 = singular path loss)

    // Only the product lambda*p enters any formula.
    double intensity() const noexcept { return lambda * p; }

    void validate() const;  // throws std::domain_error on violation
};

// Antenna count and mixture weight. Each antenna's interference is the
// shared variable with probability q and a private one otherwise, which
// induces pairwise interference correlation q^2.
struct MixtureConfig {
    int antennas = 1;
    double q = 0.5;

    void validate() const;
};

// Scalars derived from SystemParams and a linear SIR threshold.
struct DerivedConstants {
    double C;  // 2 pi^2 lambda p / (alpha sin(2 pi / alpha))
    double B;  // C * d^2 * T^(2/alpha)
};

// C constant of the interference distribution. Requires alpha > 2 (the
// path-loss integral diverges otherwise) and lambda_p > 0.
double constant_C(double lambda_p, double alpha);

// B constant of the joint SIR CCDF gap. T_linear is a linear (not dB)
// threshold; B is zero iff T_linear or lambda_p is zero.
double constant_B(double lambda_p, double d, double T_linear, double alpha);

DerivedConstants derived_constants(const SystemParams& params, double T_linear);

// Monte Carlo trial estimate with its standard error.
struct EstimateCI {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;
};

// Monte Carlo execution settings. window_half_width unset means AUTO:
// the square [-L, L]^2 is sized so it holds 1000 interferers on average,
// (2L)^2 * lambda p = 1e3. Estimates are a deterministic function of
// (master_seed, trials, model parameters) regardless of worker count.
struct SimConfig {
    std::int64_t trials = 1'000'000;
    std::uint64_t master_seed = 1;
    std::optional<double> window_half_width;  // meters; unset = AUTO
    int workers = 0;                          // 0 = hardware concurrency

    double resolved_half_width(double lambda_p) const;
    int resolved_workers() const;

    void validate() const;
};

} // namespace mrcmix
