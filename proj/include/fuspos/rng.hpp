#pragma once

#include <cstdint>

namespace fuspos {

// splitmix64: tiny, portable, and identical on every platform, unlike the
// standard distributions. Used wherever reproducibility is part of the
// contract (sweep trials, table-construction retries, sampled validation).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Map 64 random bits to a double in [0, 1).
inline double u01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Per-trial generator state derived from (seed, trial index); trials are
/// independent of each other and of execution order.
inline std::uint64_t trial_seed(std::uint64_t seed, std::int64_t trial) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(trial + 1));
    splitmix64(s);
    return s;
}

}  // namespace fuspos
