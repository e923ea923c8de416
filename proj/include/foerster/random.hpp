#pragma once

#include <array>
#include <cstdint>

namespace foerster {

/// Counter-based random stream (Philox-style 4x32, 10 rounds). A stream is a
/// pure function of (seed, stream_id), so draws are reproducible regardless
/// of execution order or worker count, and distinct stream ids give
/// statistically independent sequences.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01();

private:
    void refill();

    std::uint32_t key0_;
    std::uint32_t key1_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> out_{};
    int available_ = 0;
};

/// Stream feeding one Monte-Carlo realization.
RandomStream realization_stream(std::uint64_t seed, std::uint64_t realization);

}  // namespace foerster
