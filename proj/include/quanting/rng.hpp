#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace quanting {

// Deterministic random stream. All randomized code in the library draws
// through this wrapper instead of <random> distributions, whose output is
// implementation-defined; mt19937_64 itself is pinned by the standard, so a
// fixed seed reproduces the same stream everywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_raw() { return engine_(); }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // uniform in {0, ..., n-1}; modulo bias is negligible for n << 2^64
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(engine_() % static_cast<std::uint64_t>(n));
    }

    // standard exponential by inverse CDF
    double exponential() { return -std::log(1.0 - next_double()); }

    // standard normal, Box-Muller without caching the second value
    double normal() {
        double u1 = 1.0 - next_double();
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // splitmix64 mix; derives independent per-subtask seeds from a base seed
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace quanting
