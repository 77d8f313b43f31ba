#pragma once

#include <cstdint>
#include <initializer_list>

namespace airforge {

// splitmix64 finalizer; also used as the key-mixing hash.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t value) {
    return mix64(seed ^ (value + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2)));
}

// Counter-based random stream. The state advances by a fixed increment and
// every output is a pure hash of the state, so a stream is a deterministic
// function of its key tuple. Keying a fresh stream per work item
// (image, pixel, sample, ...) is what makes parallel runs reproducible.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(mix64(seed)) {}

    static Rng keyed(std::initializer_list<uint64_t> keys) {
        uint64_t h = 0x853c49e6748fea9bull;
        for (uint64_t k : keys) h = hash_combine(h, k);
        return Rng(h);
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    // Uniform in [0,1).
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform in [0, n). Rejection-free is not required here; the modulo bias
    // at 64 bits is far below anything the statistical tests can see.
    uint64_t next_below(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + int(next_below(uint64_t(hi - lo + 1)));
    }

private:
    uint64_t state_;
};

}  // namespace airforge
