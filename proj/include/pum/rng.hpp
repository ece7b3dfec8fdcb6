#pragma once

// Counter-based seeding: independent, reproducible streams per walker/worker.

#include <cstdint>
#include <random>

namespace pum {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 stream_rng(uint64_t seed, uint64_t stream) {
    std::seed_seq seq{splitmix64(seed), splitmix64(seed ^ (stream + 1)),
                      splitmix64(stream * 0x9e3779b97f4a7c15ULL + seed)};
    return std::mt19937_64(seq);
}

}  // namespace pum
