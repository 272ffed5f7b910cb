#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace thrifty {

/// Seeded stream with hand-written samplers, so traces do not depend on the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Knuth's multiplication method; adequate for the small means used per slice.
    long poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        if (mean > 30.0) return poisson(30.0) + poisson(mean - 30.0);
        const double limit = std::exp(-mean);
        long k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    long binomial(long trials, double p) {
        long hits = 0;
        for (long i = 0; i < trials; ++i) hits += bernoulli(p) ? 1 : 0;
        return hits;
    }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer: derives independent per-run seeds from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace thrifty
