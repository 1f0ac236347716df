#pragma once

// Deterministic random streams used by the randomized solver and the sweep.
//
// The generator is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Bounded draws use rejection sampling on the raw 64-bit output and
// never go through std::uniform_int_distribution, whose algorithm is
// implementation-defined. Together this makes every shuffle reproducible
// across compilers and platforms.

#include <cstdint>
#include <random>

namespace psum {

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the subset with the given rank inside a sweep seeded by `seed`.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t rank) noexcept {
    return mix64(seed ^ mix64(rank));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform value in [0, bound), bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        // Largest multiple of bound that fits; values at or above it are redrawn.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace psum
