#pragma once

#include <cmath>
#include <cstdint>

namespace vqansr {

// Deterministic PRNG with self-contained samplers. Standard-library
// distributions are implementation-defined, which would break the
// bit-identical reproducibility contract of the simulator and harness,
// so the few samplers needed are spelled out here (splitmix64 core).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform in [0, n).
    std::uint32_t uniform_int(std::uint32_t n) {
        return static_cast<std::uint32_t>((next_u64() >> 32) * n >> 32);
    }

    // Standard normal, Box-Muller. Uses two draws per sample; no caching so
    // the draw sequence stays easy to reason about.
    double normal() {
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Poisson by inversion of the exponential product; fine for small means.
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        double prod = next_double();
        int k = 0;
        while (prod > limit) {
            ++k;
            prod *= next_double();
        }
        return k;
    }

  private:
    std::uint64_t state_;
};

// Mixes a stream identifier into a seed so per-image generators are
// decorrelated but still fully determined by (seed, id).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed ^ (stream * 0xD6E8FEB86659FD93ULL + 0xA5A5A5A5A5A5A5A5ULL);
    z = (z ^ (z >> 32)) * 0xD6E8FEB86659FD93ULL;
    return z ^ (z >> 32);
}

}  // namespace vqansr
