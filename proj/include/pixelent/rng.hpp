#pragma once

#include <cstdint>

// Self-contained deterministic RNG (PCG32) and Poisson sampler. The standard
// library's distributions are implementation-defined, which would break the
// bitwise-reproducibility contract across compilers, so sampling is done here.

namespace pixelent {

class Pcg32 {
public:
    explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0) {
        state_ = 0;
        inc_ = (stream << 1) | 1ULL;
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const std::uint32_t xorshifted =
            static_cast<std::uint32_t>(((old >> 18) ^ old) >> 27);
        const std::uint32_t rot = static_cast<std::uint32_t>(old >> 59);
        return (xorshifted >> rot) | (xorshifted << ((32 - rot) & 31));
    }

    /// Uniform in [0, 1), 53 random bits.
    double next_double() {
        const std::uint64_t a = next_u32() >> 5;  // 27 bits
        const std::uint64_t b = next_u32() >> 6;  // 26 bits
        return (static_cast<double>(a) * 67108864.0 + static_cast<double>(b)) *
               (1.0 / 9007199254740992.0);
    }

private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 1;
};

/// Poisson draw with the given mean: inversion by sequential search for
/// small means, PTRD-style transformed rejection for large ones.
std::int64_t poisson_sample(Pcg32& rng, double mean);

}  // namespace pixelent
