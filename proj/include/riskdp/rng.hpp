#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace riskdp {

/**
 * Counter-based random stream: the k-th draw of stream s under seed is a pure
 * function of (seed, s, k), so independent streams can be consumed by any
 * number of workers in any order with identical results.
 *
 * Each draw is the SplitMix64 finalizer applied to key + k * golden-gamma,
 * where the key mixes the seed with the stream id.
 */
class CounterRng {
public:
    using result_type = std::uint64_t;

    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix(seed ^ mix(stream + kGamma))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept { return mix(key_ + (++counter_) * kGamma); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lower, double upper) noexcept { return lower + (upper - lower) * uniform(); }

    /// Standard exponential variate.
    double exponential() noexcept { return -std::log1p(-uniform()); }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace riskdp
