#pragma once

#include <span>
#include <vector>

namespace mrcmix {

// Exact up to 20!, log-gamma based beyond.
double factorial(int m);
double log_factorial(int m);

// Binomial coefficient as a double; multiplicative form for small n,
// log-gamma form for large n.
double binomial(int n, int k);

// Partial (incomplete) exponential Bell polynomial B_{m,j}(x1..x_{m-j+1}).
// B_{0,0} = 1 and B_{m,0} = 0 for m >= 1. args must supply at least
// m-j+1 leading entries; extras are ignored.
double partial_bell(int m, int j, std::span<const double> args);

// k-th entry (k = 1..count) is d^k/ds^k of C*s^(2/alpha) at s, i.e.
// C * (2/a)(2/a - 1)...(2/a - k + 1) * s^(2/a - k). Requires s > 0.
using DerivativeSequence = std::vector<double>;
DerivativeSequence power_derivatives(double C, double alpha, double s, int count);

// m-th derivative of exp(-C s^(2/alpha)) with respect to s, via the
// Bell-polynomial chain rule for high-order derivatives; the m = 0 case
// is the function itself. Requires s > 0.
double exp_term_derivative(int m, double C, double alpha, double s);

} // namespace mrcmix
