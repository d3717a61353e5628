#pragma once

#include <cstdint>

namespace qlink {

// Counter-based random stream: output k is a bijective mix of
// state0 + k*golden-ratio increment (splitmix64).  Streams for different
// (seed, stream) pairs are independent and support random access, which
// makes Monte Carlo results independent of how trials are distributed
// across threads.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : state_(mix(seed + 0x9E3779B97F4A7C15ULL * (stream + 1)) ^
                 mix(stream + 0xD1B54A32D192ED03ULL)) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace qlink
