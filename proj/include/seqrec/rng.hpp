// rng.hpp
//
// Counter-based random streams. Every stream is addressed by a key tuple
// (master seed, k1, k2, k3) hashed through the splitmix64 finalizer, so any
// unit of work (trial, component, pass) can rebuild its own stream without
// coordinating with anyone else. Results are therefore independent of
// execution order and worker count.
#pragma once

#include <cstdint>

namespace seqrec::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t k1,
                            std::uint64_t k2, std::uint64_t k3 = 0) {
    // Avalanche the seed before folding in any key: raw (seed + key) sums
    // would collide systematically for shifted pairs like (seed+1, key-1).
    std::uint64_t h = mix64(seed + kGolden);
    h = mix64(h + kGolden + k1);
    h = mix64(h + kGolden + k2);
    h = mix64(h + kGolden + k3);
    return h;
}

// splitmix64 sequence generator. 2^64 period, passes BigCrush, two
// instructions of state update; entirely adequate for Monte Carlo work here.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += kGolden);
        return mix64(z);
    }

    // Uniform on (0,1), never exactly 0 or 1 (safe to feed quantile functions).
    double next_uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Unbiased-enough integer in [0, bound) via 128-bit multiply-shift.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

// Key-tuple tags so distinct uses of the same seed never collide.
inline constexpr std::uint64_t kSupportStream  = 0x53555050;  // instance support draw
inline constexpr std::uint64_t kInstanceStream = 0x494e5354;  // per-trial instance seed
inline constexpr std::uint64_t kRunStream      = 0x52554e00;  // per-trial procedure seed
inline constexpr std::uint64_t kSweepStream    = 0x53574550;  // per-grid-point seed

} // namespace seqrec::rng
