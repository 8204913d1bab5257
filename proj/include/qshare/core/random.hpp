// Seeded deterministic randomness for measurement sampling.
#pragma once

#include <cstdint>
#include <random>

namespace qshare {

// mt19937_64 with a fixed uint64 -> [0,1) mapping, so a given seed yields the
// same trajectory on every platform for a given build. Not thread-safe; use
// one source per worker, seeded as base_seed + worker_index.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    static RandomSource for_worker(std::uint64_t base_seed, std::uint64_t worker_index) {
        return RandomSource(base_seed + worker_index);
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace qshare
