// Counter-based random streams. A stream is a pure function of
// (seed, subkeys..., counter), so replications and rounds can draw from
// independent streams in any order - including concurrently - and still
// reproduce bit-identical results.
#pragma once

#include <cstdint>
#include <initializer_list>

namespace regret::rng {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

/// 64-bit finalizer (splitmix64 output stage).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

class Stream {
public:
    explicit constexpr Stream(std::uint64_t seed) : key_(mix64(seed + kGolden)) {}

    constexpr Stream(std::uint64_t seed, std::initializer_list<std::uint64_t> subkeys)
        : Stream(seed) {
        for (std::uint64_t s : subkeys) {
            key_ = mix64(key_ ^ (s + kGolden));
        }
    }

    /// Child stream with an extra subkey; the parent is not advanced.
    constexpr Stream derive(std::uint64_t subkey) const {
        Stream child = *this;
        child.key_ = mix64(child.key_ ^ (subkey + kGolden));
        child.counter_ = 0;
        return child;
    }

    constexpr std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform integer in [0, n): high word of the 64x64 product, built
    /// from 32-bit limbs so no extended integer type is needed.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t x = next_u64();
        const std::uint64_t x_lo = x & 0xFFFFFFFFull, x_hi = x >> 32;
        const std::uint64_t n_lo = n & 0xFFFFFFFFull, n_hi = n >> 32;
        const std::uint64_t mid = x_hi * n_lo + ((x_lo * n_lo) >> 32);
        const std::uint64_t mid2 = x_lo * n_hi + (mid & 0xFFFFFFFFull);
        return x_hi * n_hi + (mid >> 32) + (mid2 >> 32);
    }

    double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace regret::rng
