#pragma once

#include <cstdint>
#include <random>

namespace chordq::testing {

// Deterministic across platforms: avoids std::uniform_* distributions, whose
// exact output is implementation-defined.
struct Rng {
    std::mt19937_64 gen;

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

    bool coin() { return (gen() & 1) != 0; }
};

}  // namespace chordq::testing
