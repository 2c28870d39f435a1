#pragma once

// Shared oracle machinery for the test suites. Everything here is
// deliberately independent of the library's implementation paths: its
// own RNG, its own finite-difference weights, its own statistics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace testsupport {

// SplitMix64-based generator, unrelated to the library's xoshiro streams.
class OracleRng {
public:
    explicit OracleRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double exponential() { return -std::log1p(-uniform01()); }

private:
    std::uint64_t state_;
};

// Fornberg's algorithm: weights of the m-th derivative at z on the given
// nodes. Computed in long double so high orders stay usable.
inline std::vector<long double> fornberg_weights(long double z,
                                                 const std::vector<long double>& nodes,
                                                 int order) {
    const int n = static_cast<int>(nodes.size()) - 1;
    std::vector<std::vector<long double>> c(
        static_cast<std::size_t>(n + 1),
        std::vector<long double>(static_cast<std::size_t>(order + 1), 0.0L));
    long double c1 = 1.0L;
    long double c4 = nodes[0] - z;
    c[0][0] = 1.0L;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, order);
        long double c2 = 1.0L;
        long double c5 = c4;
        c4 = nodes[static_cast<std::size_t>(i)] - z;
        for (int j = 0; j < i; ++j) {
            const long double c3 = nodes[static_cast<std::size_t>(i)] -
                                   nodes[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                        c1 *
                        (k * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] -
                         c5 * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)]) /
                        c2;
                c[static_cast<std::size_t>(i)][0] =
                    -c1 * c5 * c[static_cast<std::size_t>(i - 1)][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                    (c4 * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -
                     k * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)]) /
                    c3;
            c[static_cast<std::size_t>(j)][0] = c4 * c[static_cast<std::size_t>(j)][0] / c3;
        }
        c1 = c2;
    }
    std::vector<long double> weights(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j)
        weights[static_cast<std::size_t>(j)] =
            c[static_cast<std::size_t>(j)][static_cast<std::size_t>(order)];
    return weights;
}

// Central finite-difference estimate of the m-th derivative on an
// 11-node symmetric stencil with spacing h.
inline long double fd_derivative(const std::function<long double(long double)>& f,
                                 long double x, int order, long double h) {
    std::vector<long double> nodes;
    for (int offset = -5; offset <= 5; ++offset)
        nodes.push_back(x + static_cast<long double>(offset) * h);
    const std::vector<long double> weights = fornberg_weights(x, nodes, order);
    long double sum = 0.0L;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
}

// Stencil spacing for derivatives of exp(-C s^(2/alpha)): a fraction of
// both s (the power factor's scale) and the local decay length of the
// exponential factor, so truncation stays small in every regime.
inline long double fd_spacing(double C, double alpha, double s) {
    const double rate = C * (2.0 / alpha) * std::pow(s, 2.0 / alpha - 1.0);
    const double scale = std::min(s, 1.0 / std::max(rate, 1e-300));
    return 0.02L * static_cast<long double>(scale);
}

// One-sample Kolmogorov-Smirnov statistic; samples are sorted in place.
inline double ks_statistic(std::vector<double>& samples,
                           const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        const double hi = (static_cast<double>(i) + 1.0) / n - F;
        const double lo = F - static_cast<double>(i) / n;
        ks = std::max(ks, std::max(hi, lo));
    }
    return ks;
}

// Two-sample Kolmogorov-Smirnov statistic; both vectors are sorted in place.
inline double ks_statistic_two_sample(std::vector<double>& a, std::vector<double>& b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double ks = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        ks = std::max(ks, std::abs(fa - fb));
    }
    return ks;
}

// Stirling numbers of the second kind via their own recurrence; used as
// an independent oracle for Bell polynomials at all-ones arguments.
inline double stirling2(int n, int k) {
    if (n == 0 && k == 0) return 1.0;
    if (n == 0 || k == 0) return 0.0;
    std::vector<std::vector<double>> table(
        static_cast<std::size_t>(n + 1),
        std::vector<double>(static_cast<std::size_t>(k + 1), 0.0));
    table[0][0] = 1.0;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= std::min(i, k); ++j)
            table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                static_cast<double>(j) *
                    table[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] +
                table[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
    return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

} // namespace testsupport
