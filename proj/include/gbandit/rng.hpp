#pragma once

#include <cstdint>

namespace gbandit {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent child seed; used to split a master seed per
/// repetition and per purpose (rewards, noise).
inline constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
    return splitmix64(parent ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
}

/// Top 53 bits mapped to [0, 1).
inline constexpr double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Counter-based stream family: draw k of substream `stream` depends only on
/// (seed, stream, k), so the order in which substreams are consumed never
/// changes any individual sequence.
class CounterStream {
public:
    explicit constexpr CounterStream(std::uint64_t seed = 0) : seed_(seed) {}

    constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
        return bits_from_key(stream_key(stream), counter);
    }

    /// Per-substream key; hoist it out of loops that draw many values from one stream.
    constexpr std::uint64_t stream_key(std::uint64_t stream) const { return splitmix64(seed_ ^ splitmix64(stream)); }

    static constexpr std::uint64_t bits_from_key(std::uint64_t key, std::uint64_t counter) {
        return splitmix64(key + counter * 0xd1b54a32d192ed03ULL);
    }

    constexpr double uniform(std::uint64_t stream, std::uint64_t counter) const {
        return unit_double(bits(stream, counter));
    }

    constexpr std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

}  // namespace gbandit
