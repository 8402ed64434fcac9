#pragma once

#include <cstdint>

namespace pstark {

// Deterministic across platforms; std distributions are not, so we roll our own.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    uint64_t next() {
        uint64_t x = state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state = x;
        return x * 0x2545f4914f6cdd1dULL;
    }

    // uniform in [0, n), n > 0; slight modulo bias is irrelevant here
    uint64_t below(uint64_t n) { return next() % n; }
};

} // namespace pstark
