#pragma once

#include <cstdint>

namespace qrt {

// Counter-free splittable RNG. Every consumer derives its own substream from
// (seed, stream key), so draws are reproducible regardless of how work is
// scheduled across threads.
class MeasureRng {
public:
    explicit MeasureRng(std::uint64_t seed) : state_(mix(seed)) {}

    MeasureRng(std::uint64_t seed, std::uint64_t stream_key)
        : state_(mix(mix(seed) ^ mix(stream_key))) {}

    // Stream key for a (pixel, pass, iteration) triple.
    static std::uint64_t stream(std::uint32_t pixel, std::uint32_t pass,
                                std::uint32_t iteration) {
        return (std::uint64_t(pixel) << 32) ^ (std::uint64_t(pass) << 16) ^
               std::uint64_t(iteration);
    }

    MeasureRng substream(std::uint64_t key) const {
        return MeasureRng(state_, key);
    }

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [lo, hi], inclusive.
    int next_int(int lo, int hi) {
        const std::uint64_t span = std::uint64_t(hi - lo) + 1;
        // Lemire's widening-multiply reduction; bias is < 2^-32 of a draw,
        // irrelevant next to the quantum measurement noise being modeled.
        const std::uint64_t x = next_u64() >> 32;
        return lo + int((x * span) >> 32);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
        z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
        return z ^ (z >> 33);
    }

    std::uint64_t state_;
};

} // namespace qrt
