#pragma once

#include <cstdint>
#include <random>

namespace ambit {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent substream for (seed, stream, index); used to give every Monte
// Carlo path its own engine regardless of how paths are scheduled on threads.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ (stream * 0xd1b54a32d192ed03ULL));
    s = splitmix64(s ^ (index + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    return Rng(seq);
}

}  // namespace ambit
