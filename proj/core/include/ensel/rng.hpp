#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace ensel {

// SplitMix64 finalizer (Steele, Lea & Flood 2014). Used for seed mixing only.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// 64-bit FNV-1a hash of a component name.
std::uint64_t fnv1a64(std::string_view text) noexcept;

// Sub-seed for a named component: start from seed ^ fnv1a64(component), then fold each
// index in as x = splitmix64(x ^ splitmix64(index)). Identical inputs give identical seeds
// on every platform.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view component,
                          std::initializer_list<std::uint64_t> indices = {}) noexcept;

/// Reproducible random source over std::mt19937_64, whose output sequence is fixed by
/// the C++ standard. The engine is seeded with the 64-bit seed directly. All derived
/// draws are defined here rather than through <random> distributions, whose algorithms
/// are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by rejection on the top of the 64-bit range.
    std::uint64_t bounded(std::uint64_t bound);

    // Fair coin from the most significant bit.
    bool coin() { return (next() >> 63) != 0; }

    // Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ensel
