#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mrcmix {

// SplitMix64 step; also used as the seed-mixing finalizer.
inline std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Collision-free combination of (master seed, stream index): the index
// map is injective and the finalizer is bijective.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t z = a + 0x9E3779B97F4A7C15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman/Vigna). Small, fast, and entirely under our
// control, which keeps per-trial streams a pure function of the seed.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Unit-mean exponential via inverse transform; log1p keeps the
    // argument away from log(0).
    double exponential() noexcept {
        return -std::log1p(-uniform01());
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

// Private random stream of one Monte Carlo trial: a pure function of
// (master_seed, trial_index), independent of worker scheduling.
inline Xoshiro256pp trial_stream(std::uint64_t master_seed, std::uint64_t trial_index) noexcept {
    return Xoshiro256pp(mix64(master_seed, trial_index));
}

// Poisson sample: multiplication method below mean 10, Hormann's PTRD
// transformed rejection above.
std::int64_t sample_poisson(Xoshiro256pp& rng, double mean);

} // namespace mrcmix
