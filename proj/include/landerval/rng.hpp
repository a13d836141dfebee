#pragma once

#include <cmath>
#include <cstdint>

namespace landerval {

// Stream ids for the counter-based generator. Every draw comes from a stream
// keyed by (base seed, rollout index, stream id), so initial conditions,
// gusts, observation noise, and policy noise are disjoint and any rollout is
// reproducible from its seed alone, independent of scheduling.
enum class StreamId : std::uint64_t {
    initial_conditions = 0,
    gusts = 1,
    observation_noise = 2,
    policy_noise = 3,
    synthetic_outcome = 4,
};

namespace detail {

// SplitMix64 finalizer, used as the per-draw hash.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based stream: draw k is a pure function of (key, k). No state
// beyond the counter, so there is nothing to share or lock across threads.
class RngStream {
public:
    RngStream(std::uint64_t base_seed, std::uint64_t rollout_index, StreamId stream)
        : key_(detail::mix64(detail::mix64(detail::mix64(base_seed) ^ rollout_index) ^
                             static_cast<std::uint64_t>(stream))) {}

    std::uint64_t next_u64() { return detail::mix64(key_ ^ detail::mix64(counter_++)); }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }

    // Box-Muller without a cached spare: the draw count stays a pure function
    // of the call count.
    double next_normal() {
        double u1 = next_unit();
        const double u2 = next_unit();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Seed chain for rollout i of a Monte Carlo run.
inline std::uint64_t rollout_seed(std::uint64_t base_seed, std::uint64_t index) {
    return detail::mix64(detail::mix64(base_seed) ^ index);
}

}  // namespace landerval
