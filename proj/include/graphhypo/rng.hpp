#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>

namespace graphhypo {

// 64-bit mixer (splitmix64 finalizer). Used for seed derivation so that
// replicate streams are decorrelated even for adjacent seeds/indices.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Derive the seed for replicate `index` from a master seed. The same index
// yields the same stream everywhere, which keeps replicate runs pairable
// across samplers and budgets.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index + 1));
}

// Deterministic RNG: mt19937_64 raw output is pinned by the standard, all
// value transforms are hand-rolled here so results are identical across
// platforms and standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased integer in [0, n). n must be >= 1.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x, r;
        do {
            x = engine_();
            r = x % n;
        } while (x - r > std::uint64_t(-1) - (n - 1));
        return r;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return double(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Standard normal via Box-Muller; the spare draw is cached.
    double normal() {
        if (spare_) {
            double v = *spare_;
            spare_.reset();
            return v;
        }
        double u1;
        do {
            u1 = unit();
        } while (u1 <= 0.0);
        double u2 = unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        return r * std::cos(a);
    }

    // Index draw proportional to non-negative weights. Total must be > 0.
    std::size_t weighted(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double x = unit() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (x < acc) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    // True with probability p.
    bool chance(double p) { return unit() < p; }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

}  // namespace graphhypo
