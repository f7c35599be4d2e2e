#pragma once

#include <cstdint>

namespace lcx {

/// SplitMix64 (Steele, Lea & Flood, "Fast splittable pseudorandom number
/// generators", OOPSLA 2014).  Chosen because the algorithm is three lines of
/// integer arithmetic that any language reproduces bit-identically; every
/// seeded corpus in this library regenerates exactly from its seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * next_double(); }

    /// Integer in [lo, hi] inclusive.
    long long uniform_int(long long lo, long long hi) noexcept {
        return lo + static_cast<long long>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    /// Independent child stream, a deterministic function of the parent state.
    SplitMix64 split() noexcept { return SplitMix64(next_u64()); }

private:
    std::uint64_t state_;
};

}  // namespace lcx
