#pragma once

#include <cstdint>

#include "repsurf/error.hpp"

namespace repsurf {

/// Counter-based random stream: output i depends only on (seed, i), so a copy
/// of the stream replays the exact same sequence. Uses the splitmix64 finalizer.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;

    RngStream() = default;
    explicit RngStream(std::uint64_t s) : seed(s) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (++counter);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal scaled by stdev; consumes two uniforms (Box-Muller).
    double normal(double stdev);

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }
};

/// One Bernoulli(p) draw; advances the stream by exactly one counter step.
bool rng_bernoulli(RngStream& stream, double p);

}  // namespace repsurf
