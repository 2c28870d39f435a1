#pragma once

#include <cstdint>

namespace mrcmix {

// CDF of U_n, the combined SIR-sum variable of n antennas that share one
// interference power (scaled to the unit serving distance):
//   F(u) = 1 - sum_{m=0}^{n-1} (-1)^m u^m/m! * d^m/ds^m exp(-C s^(2/a)) |_{s=u}.
// n = 0 is the degenerate U_0 = 0 (CDF is the unit step). Output clamped
// to [0, 1]; clamps beyond 1e-9 are counted on the warning channel.
double cdf_U(double u, int n, double C, double alpha);

// Marginal distribution of V = h / J for one antenna with private
// interference: CDF 1 - exp(-C v^(2/a)).
double cdf_V(double v, double C, double alpha);

// Density of V; v = 0 is a domain error (integrable singularity).
double pdf_V(double v, double C, double alpha);

// Inverse-transform sample of V from a uniform(0,1) variate:
// V = (-ln(1 - u01) / C)^(a/2).
double sample_V(double u01, double C, double alpha);

// Probability outputs are clamped into [0, 1]; excursions larger than
// 1e-9 (round-off from the alternating sum should stay far below that)
// increment this counter.
std::uint64_t clamp_warning_count() noexcept;
void reset_clamp_warnings() noexcept;

} // namespace mrcmix
