#include "mrcmix/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrcmix {

namespace {

// 0!..20! exact in double precision range.
constexpr double kFactorials[21] = {
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
};

} // namespace

double factorial(int m) {
    if (m < 0) throw std::domain_error("factorial of a negative integer");
    if (m <= 20) return kFactorials[m];
    return std::exp(std::lgamma(static_cast<double>(m) + 1.0));
}

double log_factorial(int m) {
    if (m < 0) throw std::domain_error("factorial of a negative integer");
    if (m <= 20) return std::log(kFactorials[m]);
    return std::lgamma(static_cast<double>(m) + 1.0);
}

double binomial(int n, int k) {
    if (n < 0 || k < 0) throw std::domain_error("binomial needs nonnegative arguments");
    if (k > n) return 0.0;
    if (k > n - k) k = n - k;
    if (k == 0) return 1.0;
    if (n > 60) {
        // Log-space form once products would degrade; intended range is
        // small N, so this path is rarely taken.
        return std::round(std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k)));
    }
    double result = 1.0;
    for (int i = 1; i <= k; ++i)
        result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(result);
}

double partial_bell(int m, int j, std::span<const double> args) {
    if (m < 0 || j < 0)
        throw std::invalid_argument("partial_bell: indices must be nonnegative");
    if (j > m)
        throw std::invalid_argument("partial_bell: j exceeds m");
    if (j == 0) return m == 0 ? 1.0 : 0.0;
    const int needed = m - j + 1;
    if (static_cast<int>(args.size()) < needed)
        throw std::invalid_argument("partial_bell: needs " + std::to_string(needed) +
                                    " arguments, got " + std::to_string(args.size()));

    // B_{mi,ji} = sum_{i=1}^{mi-ji+1} C(mi-1, i-1) x_i B_{mi-i, ji-1},
    // filled row by row; table[mi][ji] for mi <= m, ji <= j.
    std::vector<double> table(static_cast<std::size_t>(m + 1) * (j + 1), 0.0);
    auto at = [&](int mi, int ji) -> double& {
        return table[static_cast<std::size_t>(mi) * (j + 1) + ji];
    };
    at(0, 0) = 1.0;
    for (int mi = 1; mi <= m; ++mi) {
        for (int ji = 1; ji <= std::min(mi, j); ++ji) {
            double sum = 0.0;
            for (int i = 1; i <= mi - ji + 1; ++i)
                sum += binomial(mi - 1, i - 1) * args[i - 1] * at(mi - i, ji - 1);
            at(mi, ji) = sum;
        }
    }
    return at(m, j);
}

DerivativeSequence power_derivatives(double C, double alpha, double s, int count) {
    if (!(s > 0.0))
        throw std::domain_error("power_derivatives requires s > 0");
    if (count < 0)
        throw std::invalid_argument("power_derivatives: negative count");
    const double b = 2.0 / alpha;
    DerivativeSequence values(static_cast<std::size_t>(count));
    double coeff = C;
    for (int k = 1; k <= count; ++k) {
        coeff *= b - static_cast<double>(k - 1);
        values[static_cast<std::size_t>(k - 1)] = coeff * std::pow(s, b - static_cast<double>(k));
    }
    return values;
}

double exp_term_derivative(int m, double C, double alpha, double s) {
    if (m < 0) throw std::invalid_argument("exp_term_derivative: negative order");
    if (!(s > 0.0))
        throw std::domain_error("exp_term_derivative requires s > 0");
    const double outer = std::exp(-C * std::pow(s, 2.0 / alpha));
    if (m == 0) return outer;

    const DerivativeSequence inner = power_derivatives(C, alpha, s, m);
    double sum = 0.0;
    double sign = -1.0;
    for (int j = 1; j <= m; ++j, sign = -sign) {
        sum += sign * partial_bell(m, j, std::span<const double>(inner).first(
                                             static_cast<std::size_t>(m - j + 1)));
    }
    return outer * sum;
}

} // namespace mrcmix
