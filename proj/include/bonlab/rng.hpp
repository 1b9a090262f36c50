#pragma once

#include <cstdint>

namespace bonlab {

namespace detail {

// 64-bit finalizer (Stafford mix13). Pure integer ops, identical on every platform.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

} // namespace detail

// Counter-based seeded generator. A stream is fully determined by
// (seed, stream_id): the internal state is a counter advanced by a
// per-stream odd increment, so identical (seed, stream) pairs replay
// byte-identical sequences regardless of what other streams do.
//
// Parallel work derives one stream per trial/job index via substream(),
// which depends only on the original (seed, stream), never on draws made.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {
        state_ = detail::mix64(seed + 0x9e3779b97f4a7c15ULL) ^
                 detail::mix64(stream + 0x6a09e667f3bcc909ULL);
        gamma_ = detail::mix64(state_ ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL)) | 1ULL;
    }

    std::uint64_t next_u64() {
        state_ += gamma_;
        return detail::mix64(state_);
    }

    // Uniform double in [0, 1): top 53 bits of a draw.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Rejection keeps it exactly uniform.
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do { x = next_u64(); } while (x >= limit);
        return x % n;
    }

    // Derived stream for item `index` (trial, job, ...). Deterministic in
    // (seed, stream, index) only.
    Rng substream(std::uint64_t index) const {
        return Rng(seed_, detail::mix64(stream_ + 0x9e3779b97f4a7c15ULL) ^ detail::mix64(index));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_;
    std::uint64_t gamma_;
};

} // namespace bonlab
