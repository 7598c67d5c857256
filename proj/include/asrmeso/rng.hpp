#pragma once

#include <cstdint>
#include <random>

namespace asrmeso {

// All stochastic generation (sphere packing, gel seeding) draws from this
// wrapper around std::mt19937_64. The raw engine output is bit-portable, but
// <random> distributions are not specified bit-exactly across standard
// library implementations, so uniforms are derived here directly from the
// 53 high bits of the engine. Same seed -> same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform integer in [0, n), unbiased via rejection. n must be > 0.
    std::uint64_t index(std::uint64_t n) {
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
        std::uint64_t r;
        do {
            r = eng_();
        } while (r >= limit);
        return r % n;
    }

private:
    std::mt19937_64 eng_;
};

}
