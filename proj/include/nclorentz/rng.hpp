#pragma once

// Deterministic random number generation.
//
// Every randomized routine in the library draws from seeded_rng, which wraps
// std::mt19937_64 and derives doubles and bounded integers itself instead of
// going through std::uniform_*_distribution.  The standard distributions are
// allowed to differ between standard library implementations; the mappings
// below are fixed arithmetic on the raw 64-bit stream, so a seed produces the
// same draws on every platform.  Reports record the engine name so runs can
// be matched to the stream that produced them.

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace nclorentz {

class seeded_rng {
public:
    static constexpr const char* engine_name = "mt19937_64";

    explicit seeded_rng(std::uint64_t seed) : engine_(seed), base_seed_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 significant bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // Uniform integer in [lo, hi], both ends included.  Rejection sampling
    // keeps the draw unbiased without touching std::uniform_int_distribution.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit range
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t draw = next_u64();
        while (draw >= limit) draw = next_u64();
        return lo + static_cast<std::int64_t>(draw % span);
    }

    // Uniform over the square [-1, 1]^2 in the complex plane.
    std::complex<double> uniform_complex() {
        const double re = uniform(-1.0, 1.0);
        const double im = uniform(-1.0, 1.0);
        return {re, im};
    }

    bool coin() { return (next_u64() & 1u) != 0; }

    // Derive an independent child seed for stream `stream`.  Work items split
    // this way can be evaluated in any order (or concurrently) and still see
    // the same draws.  The mix is splitmix64 applied to seed + stream offset.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Child generator for stream `stream`, seeded from the seed this
    // generator was constructed with (not from its current position).
    seeded_rng fork(std::uint64_t stream) const {
        return seeded_rng(derive(base_seed_, stream));
    }

    std::uint64_t base_seed() const { return base_seed_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t base_seed_;
};

}  // namespace nclorentz
