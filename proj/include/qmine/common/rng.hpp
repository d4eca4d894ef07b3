#pragma once

#include <cstdint>
#include <random>

namespace qmine {

using Rng = std::mt19937;

inline Rng make_rng(uint64_t seed) {
    return Rng(static_cast<Rng::result_type>(seed));
}

// Derive an independent stream for a named stage so adding a consumer in one
// place does not shift the draws of another.
inline Rng make_rng(uint64_t seed, uint64_t stream) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)};
    return Rng(seq);
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline size_t uniform_index(Rng& rng, size_t n) {
    return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
}

}  // namespace qmine
