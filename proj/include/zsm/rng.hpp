#pragma once

#include <cstdint>

namespace zsm {

// Counter-based generator: every variate is a pure function of
// (seed_root, stream, counter), so parallel consumers (walkers, noise
// realizations, probe trials) reproduce bit-identically regardless of
// scheduling. Mixing is the SplitMix64 finalizer over a combined key.
class CounterRng {
public:
    CounterRng(std::uint64_t seed_root, std::uint64_t stream)
        : seed_(seed_root), stream_(stream) {}

    double uniform();      // [0, 1)
    double normal();       // standard normal, Box-Muller pair cached

    // Stateless access for a specific counter value.
    static double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t x);

} // namespace zsm
