#pragma once

// Deterministic random streams.
//
// Every consumer of randomness gets its own stream, derived by hashing the
// run seed together with a role tag and loop indices (generation, slot,
// attempt, ...).  Results are therefore independent of evaluation order and
// of how many worker threads execute a generation.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace hexevo {

// Finalizer from splitmix64; good avalanche behaviour, cheap.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Order-sensitive combine of several ids into one stream seed.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x5851f42d4c957f2dULL;
    for (std::uint64_t p : parts)
        h = splitmix64(h ^ p);
    return h;
}

// Role tags for sub-stream derivation.
namespace stream {
inline constexpr std::uint64_t kSeeding = 1;   // population seeding draws
inline constexpr std::uint64_t kOps = 2;       // DE operator draws (per generation, slot)
inline constexpr std::uint64_t kEval = 3;      // evaluation noise (per generation, slot)
inline constexpr std::uint64_t kRestart = 4;   // restart re-initialisation draws
inline constexpr std::uint64_t kAttempt = 5;   // per-flight noise inside one evaluation
}  // namespace stream

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    // Uniform on [0, 1).
    double unit() {
        return (gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1].
    double open_unit() { return 1.0 - unit(); }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Standard normal via Box-Muller; fixed two draws per call.
    double gauss() {
        double u1 = open_unit();
        double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // Uniform integer in {0, ..., n-1}.  Modulo bias is negligible for the
    // small n used here (population indices, gene counts).
    int index(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace hexevo
