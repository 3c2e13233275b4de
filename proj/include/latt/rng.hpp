#pragma once

#include <cstdint>
#include <random>

namespace latt {

/// Thin deterministic wrapper around mt19937_64. Draws are taken directly
/// from the engine (whose output sequence is fully specified by the
/// standard) instead of through distribution objects, so recorded seeds
/// replay identically everywhere.
struct Rng {
    explicit Rng(std::uint64_t seed) : engine(seed) {}

    std::uint64_t u64() { return engine(); }

    /// Uniform-ish draw in [0, n). Modulo bias is irrelevant at our scales.
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(u64() % n); }

    bool chance(double p) { return unit() < p; }

    double unit() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine;
};

}  // namespace latt
