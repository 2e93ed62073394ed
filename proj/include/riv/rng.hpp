#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace riv {

/// splitmix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Order-sensitive hash of a seed and a list of tags.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

/// Seeded stream with portable uniform and normal transforms (the std
/// distributions are implementation-defined, these are not).
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(mix64(seed)) {}

    /// Uniform on [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    /// Box-Muller, one variate per call so a stream's prefix never depends on its length.
    double normal(double mean, double stddev);

private:
    std::mt19937_64 engine_;
};

}  // namespace riv
