// Deterministic pseudo-random number generation for Monte Carlo runs.
//
// SplitMix64 is used instead of std::mt19937 because its output sequence is
// fully specified by a single 64-bit seed, is identical across platforms and
// standard-library implementations, and supports cheap shard seeding
// (seed + shard index) so sampling runs can be reproduced piecewise.
#pragma once

#include <cstdint>

namespace kmsharp {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace kmsharp
