#pragma once

#include <cstdint>
#include <random>

namespace burstrec {

inline std::uint64_t splitmix64_next(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stream-indexed seed derivation: the stream-th output of a splitmix64
/// sequence started at `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed + stream * 0x9E3779B97F4A7C15ULL;
    return splitmix64_next(state);
}

/// Deterministic uniform variates with a fixed bit-to-double mapping, so
/// sequences are reproducible across platforms and standard libraries.
class Uniform01 {
  public:
    explicit Uniform01(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1).
    double next() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1].
    double symmetric() { return 2.0 * next() - 1.0; }

  private:
    std::mt19937_64 eng_;
};

}  // namespace burstrec
