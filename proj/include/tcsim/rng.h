#pragma once

#include <cstdint>
#include <random>

namespace tcsim {

/// Generator used for every stochastic step. std::mt19937_64 output is fixed
/// by the C++ standard, so streams are identical across platforms.
using Rng = std::mt19937_64;

inline constexpr const char *kRngName = "mt19937_64/seed_seq(master,stream,index)";

/// Independent stream for item `index` of stream family `stream` under
/// `master_seed`. Trials of a Monte Carlo point use stream 0.
inline Rng derive_rng(uint64_t master_seed, uint64_t index, uint64_t stream = 0) {
    std::seed_seq seq{
        static_cast<uint32_t>(master_seed), static_cast<uint32_t>(master_seed >> 32),
        static_cast<uint32_t>(stream),      static_cast<uint32_t>(stream >> 32),
        static_cast<uint32_t>(index),       static_cast<uint32_t>(index >> 32),
    };
    return Rng(seq);
}

/// Uniform double in [0, 1) from the top 53 bits; std::uniform_real_distribution
/// is implementation defined and would break cross-platform replay.
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool coin(Rng &rng) { return rng() >> 63; }

}  // namespace tcsim
