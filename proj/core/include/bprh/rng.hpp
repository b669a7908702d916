#pragma once

#include <cstdint>

namespace bprh {

/**
 * Counter-based pseudo-random stream.
 *
 * Each (seed, stream) pair yields an independent sequence, so work items
 * (sample pairs, bootstrap replicates, Monte Carlo cells) can each own the
 * stream keyed by their index and produce output that does not depend on
 * thread scheduling.
 */
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ULL))), counter_(0) {}

    explicit RngStream(std::uint64_t seed) noexcept : RngStream(seed, 0) {}

    std::uint64_t next_u64() noexcept {
        counter_ += 0x9E3779B97F4A7C15ULL;
        return mix(key_ + counter_);
    }

    /// Uniform draw strictly inside (0,1); never returns 0 or 1.
    double next_unit() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace bprh
