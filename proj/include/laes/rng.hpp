#pragma once

#include <cstdint>
#include <string_view>

namespace laes {

// Name recorded in run metadata so outputs identify the generator.
inline constexpr std::string_view rng_name = "splitmix64";

/// Seeded pseudo-random stream based on splitmix64 (Vigna, 2015).
///
/// The algorithm is fixed and integer-only, so a given seed produces the
/// same draw sequence on every platform. Doubles are derived from the top
/// 53 bits, giving values in [0, 1).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// One Bernoulli(p) draw. p >= 1 always succeeds, p <= 0 never does.
    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + next_double() * (hi - lo);
    }

    /// Independent substream for replication `index` of a master seed.
    ///
    /// Both inputs pass through the splitmix64 finalizer before mixing, so
    /// substreams stay decorrelated even for adjacent indices, and adding
    /// replications never perturbs existing ones.
    static RngStream substream(std::uint64_t master_seed, std::uint64_t index) {
        return RngStream(mix(mix(master_seed) ^ mix(index + 1)));
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace laes
