#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace rcga {

// 64-bit Mersenne Twister everywhere. Period 2^19937-1, and the output
// stream for a given seed is pinned by the standard, so a (config, seed)
// pair reproduces a run bit for bit.
using Rng = std::mt19937_64;

// SplitMix64 finalizer. Replication stream s of a batch draws its seed as
// avalanche(base + (s+1) * golden_gamma), which decorrelates streams even
// for adjacent bases and stream indices.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Uniform double in [0,1) from the top 53 bits of one generator word.
// std::uniform_real_distribution is implementation-defined; this mapping
// is not.
template <typename Urbg>
double unit_double(Urbg& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Category that u falls into under a cumulative scan of row. Entries with
// zero probability are never selected. If accumulated rounding leaves u at
// or beyond the total mass, the last positive entry takes the draw.
inline int sample_categorical(std::span<const double> row, double u) {
    double cum = 0.0;
    int last_positive = -1;
    for (int j = 0; j < static_cast<int>(row.size()); ++j) {
        if (row[j] > 0.0) {
            cum += row[j];
            last_positive = j;
            if (u < cum) return j;
        }
    }
    return last_positive;
}

}  // namespace rcga
