// Deterministic splittable random streams for Monte-Carlo trajectory sampling.
//
// Every stream is derived by hashing (master seed, channel tag, trajectory
// index), so any trajectory can be regenerated in isolation and results do
// not depend on how work is split across threads. Standard-library
// distributions are avoided on purpose: their output is not specified
// bit-for-bit across implementations.
#pragma once

#include <cmath>
#include <cstdint>

namespace rtnecho {

/// SplitMix64 generator (Steele, Lea, Flood; finalizer due to Vigna).
/// Passes BigCrush; one 64-bit word of state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Exponential variate with the given rate (mean 1/rate).
    /// Inverse CDF on 1-u keeps the argument of log in (0, 1].
    double next_exponential(double rate) {
        return -std::log1p(-next_unit()) / rate;
    }

private:
    std::uint64_t state_;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace detail

/// Stream for trajectory `index` of channel `channel_tag` under `master_seed`.
/// Counter-based: a pure hash of the triple, O(1) to reach any stream.
inline SplitMix64 trajectory_stream(std::uint64_t master_seed,
                                    std::uint64_t channel_tag,
                                    std::uint64_t index) {
    std::uint64_t s = detail::mix64(master_seed + 0x9E3779B97F4A7C15ull);
    s = detail::mix64(s ^ (channel_tag + 0xBF58476D1CE4E5B9ull));
    s = detail::mix64(s ^ (index + 0x94D049BB133111EBull));
    return SplitMix64(s);
}

} // namespace rtnecho
