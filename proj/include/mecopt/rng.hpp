#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mecopt {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent sub-stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = mix64(seed);
    for (auto k : keys) {
        h = mix64(h ^ mix64(k));
    }
    return h;
}

// Uniform double in [0, 1).
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in (0, 1].
inline double uniform_open_closed(Rng& rng)
{
    return 1.0 - uniform01(rng);
}

} // namespace mecopt
