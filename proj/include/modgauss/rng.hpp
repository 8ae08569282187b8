#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace modgauss {

struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// mt19937_64 keyed by (seed, stream) through seed_seq. Both are fully
// specified by the standard, and doubles are built from raw bits, so a given
// (seed, stream) yields the same draws everywhere.
class Rng {
public:
    explicit Rng(RngSeed s) {
        std::seed_seq seq{static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32),
                          static_cast<std::uint32_t>(s.stream), static_cast<std::uint32_t>(s.stream >> 32),
                          0x6d6f64u};
        eng_.seed(seq);
    }

    std::uint64_t bits() { return eng_(); }

    // Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do x = eng_();
        while (x >= limit);
        return x % n;
    }

    double normal() {
        // Box-Muller; the spare value is dropped to keep the stream stateless.
        double u1 = 1.0 - uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace modgauss
