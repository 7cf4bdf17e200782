#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace twqkd {

namespace detail {

// splitmix64: seed expander / substream key mixer (Vigna's reference constants).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t rotl64(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
}

}  // namespace detail

/// Deterministic xoshiro256++ stream with index-addressable substreams.
///
/// Replay contract: the draw sequence is a pure function of the seed (and,
/// for substreams, the index), identical across platforms and worker counts.
/// Substream keys mix seed and index through splitmix64, so substream i never
/// depends on how many values substream j consumed. Gaussian draws use
/// Box-Muller with no cached spare: every call consumes a fixed number of
/// raw draws, keeping call patterns replayable.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) {
        std::uint64_t mix = seed;
        for (auto& word : state_) word = detail::splitmix64_next(mix);
    }

    /// Stream for logical index `index` (e.g. one protocol round) under `seed`.
    static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t mix = seed;
        std::uint64_t key = detail::splitmix64_next(mix) ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        return RandomStream(key);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// One standard normal draw. Consumes exactly two raw u64 draws (the
    /// Box-Muller partner is discarded, never cached).
    double standard_normal() { return standard_normal_pair().first; }

    /// Two independent standard normals from one Box-Muller transform.
    std::pair<double, double> standard_normal_pair() {
        const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

private:
    std::uint64_t state_[4]{};
};

}  // namespace twqkd
