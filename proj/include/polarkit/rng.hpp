#pragma once

#include <cstdint>

namespace polarkit {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for the `stream`-th independent stream of an experiment keyed by `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return seed ^ splitmix64(stream);
}

/// Counter-based generator: the k-th draw is a pure function of (key, k),
/// so streams are reproducible across platforms and independent of
/// scheduling. Distribution helpers are implemented here rather than via
/// <random> distributions, whose output is implementation-defined.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(splitmix64(key)) {}

    constexpr std::uint64_t next_u64() noexcept { return splitmix64(key_ + 0x632be59bd9b4e019ULL * counter_++); }

    // Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on {0, ..., bound - 1}; bound > 0.
    constexpr std::uint64_t below(std::uint64_t bound) noexcept
    {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold)
                return r % bound;
        }
    }

    constexpr bool bit() noexcept { return (next_u64() >> 63) != 0; }

    constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace polarkit
