#pragma once
#include <cstdint>

namespace vtel {

// Stateless counter-based uniforms: u = mix(key, counter). Any (seed, replica,
// x, y) tuple maps to one fixed double, so results never depend on visit order
// or thread layout.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t stream_key(uint64_t seed, uint64_t replica) {
    return mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ (replica * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

inline double to_unit(uint64_t r) { return double(r >> 11) * 0x1.0p-53; }

inline double uniform_at(uint64_t key, uint32_t x, uint32_t y) {
    uint64_t c = (uint64_t(x) << 32) | y;
    return to_unit(mix64(key ^ mix64(c + 0x9e3779b97f4a7c15ULL)));
}

// Sequential stream for walks: counter increments per draw.
struct CounterStream {
    uint64_t key;
    uint64_t n = 0;
    explicit CounterStream(uint64_t k) : key(k) {}
    double uniform() { return to_unit(mix64(key ^ mix64(++n * 0x9e3779b97f4a7c15ULL))); }
};

}  // namespace vtel
