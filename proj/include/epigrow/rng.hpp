#pragma once

#include <cstdint>

// Counter-based random streams. Every draw is a pure hash of
// (seed, stream, counter), so per-site / per-cluster sampling is
// reproducible independently of evaluation order or threading.

namespace epigrow::rng {

inline constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline uint64_t mix64(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

inline uint64_t hash3(uint64_t seed, uint64_t stream, uint64_t counter) {
    uint64_t h = mix64(seed + kGolden);
    h = mix64(h ^ (stream * 0xC2B2AE3D27D4EB4Full));
    h = mix64(h ^ (counter * 0x165667B19E3779F9ull));
    return h;
}

// uniform in [0, 1)
inline double to_u01(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double u01(uint64_t seed, uint64_t stream, uint64_t counter) {
    return to_u01(hash3(seed, stream, counter));
}

// stream tags; combined with a step index as (tag << 56) ^ step
enum Stream : uint64_t {
    kInit = 1,
    kGrowth = 2,
    kEpidemicCluster = 3,
    kEpidemicLanding = 4,
    kGraphGen = 5,
    kTheta = 6,
    kShuffle = 7,
};

inline uint64_t stream_id(Stream tag, uint64_t step = 0) {
    return (static_cast<uint64_t>(tag) << 56) ^ step;
}

// Sequential view over one counter-based stream.
class Sequence {
  public:
    Sequence(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

    uint64_t next_u64() { return hash3(seed_, stream_, n_++); }
    double next_u01() { return to_u01(next_u64()); }

    // unbiased integer in [0, bound) (Lemire's multiply-shift with rejection)
    uint64_t next_below(uint64_t bound) {
        uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto lo = static_cast<uint64_t>(m);
        if (lo < bound) {
            const uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * bound;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

  private:
    uint64_t seed_;
    uint64_t stream_;
    uint64_t n_ = 0;
};

}  // namespace epigrow::rng
