#include "mrcmix/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace mrcmix {

namespace {

// Knuth multiplication method; cost grows linearly in the mean.
std::int64_t poisson_small(Xoshiro256pp& rng, double mean) {
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double product = rng.uniform01();
    while (product > limit) {
        ++k;
        product *= rng.uniform01();
    }
    return k;
}

// Hormann's transformed rejection with squeeze (PTRS), valid for
// mean >= 10. The first test accepts the bulk without touching lgamma.
std::int64_t poisson_ptrs(Xoshiro256pp& rng, double mean) {
    const double smu = std::sqrt(mean);
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double u = rng.uniform01() - 0.5;
        const double v = rng.uniform01();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            k * log_mean - mean - std::lgamma(k + 1.0))
            return static_cast<std::int64_t>(k);
    }
}

} // namespace

std::int64_t sample_poisson(Xoshiro256pp& rng, double mean) {
    if (!(mean >= 0.0)) throw std::domain_error("Poisson mean must be nonnegative");
    if (mean == 0.0) return 0;
    if (mean < 10.0) return poisson_small(rng, mean);
    return poisson_ptrs(rng, mean);
}

} // namespace mrcmix
