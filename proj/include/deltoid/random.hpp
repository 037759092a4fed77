#ifndef DELTOID_RANDOM_HPP
#define DELTOID_RANDOM_HPP

#include <cstdint>

namespace deltoid {

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so results do not depend on platform, thread layout or the order
// in which draws are made. The mixing function is the SplitMix64 finalizer
// applied twice with distinct odd multipliers for the stream and counter.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const noexcept
    {
        std::uint64_t x = mix(seed_ ^ (stream * 0xD1B54A32D192ED03ULL));
        return mix(x ^ (counter * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform(std::uint64_t stream, std::uint64_t counter) const noexcept
    {
        return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
    }

    constexpr std::uint64_t seed() const noexcept { return seed_; }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept
    {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

} // namespace deltoid

#endif
