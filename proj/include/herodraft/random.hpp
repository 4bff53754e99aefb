#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace herodraft {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a list of indices.
template <typename... Ts>
constexpr std::uint64_t derive_seed(std::uint64_t base, Ts... indices) {
    std::uint64_t h = mix64(base);
    ((h = mix64(h ^ static_cast<std::uint64_t>(indices))), ...);
    return h;
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng);
}

/// Samples an index proportionally to non-negative weights.
inline std::size_t weighted_index(Rng& rng, std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("weighted_index: weights sum to zero");
    double r = uniform_real(rng, 0.0, total);
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        last_positive = i;
        if (r < weights[i]) return i;
        r -= weights[i];
    }
    return last_positive;
}

}  // namespace herodraft
