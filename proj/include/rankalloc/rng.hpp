#pragma once
// Reproducible pseudo-random streams: xoshiro256** seeded through SplitMix64.
// A (seed, stream) pair names an independent substream, so parallel work can be
// split into fixed blocks without the result depending on the schedule.

#include <array>
#include <cstdint>

namespace rankalloc {

class SplitMix64 {
public:
    constexpr explicit SplitMix64(std::uint64_t state) : state_(state) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    Xoshiro256(std::uint64_t seed, std::uint64_t stream) {
        // Hash the stream id before mixing so neighbouring streams start far apart.
        SplitMix64 key(stream);
        SplitMix64 mix(seed ^ key.next());
        for (auto& word : s_) word = mix.next();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
};

}  // namespace rankalloc
