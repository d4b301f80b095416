// Deterministic random streams.
//
// All distributions are implemented on top of raw mt19937_64 output so that a
// given (seed, draw sequence) produces identical results on every platform and
// standard library. Per-trajectory seeds come from a SplitMix64 mix of
// (master_seed, trajectory_index), so ensembles are reproducible regardless of
// how trajectories are scheduled across threads.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mipt {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based derivation: hash the index, fold in the master seed, hash again.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed ^ splitmix64(index + 0x51ed270b74a4a7e5ULL));
}

class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    bool bit() { return gen_() >> 63; }

    // Uniform double in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return u01() < p; }

    // Uniform integer in [0, n) by masked rejection.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n <= 1) return 0;
        const int bits = 64 - std::countl_zero(n - 1);
        const std::uint64_t mask = (bits == 64) ? ~0ULL : ((1ULL << bits) - 1);
        for (;;) {
            const std::uint64_t v = gen_() & mask;
            if (v < n) return v;
        }
    }

    // Marsaglia polar method; one cached spare per pair of draws.
    double gaussian(double mean, double stddev) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + stddev * spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * u01() - 1.0;
            v = 2.0 * u01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return mean + stddev * u * f;
    }

    std::uint64_t binomial(std::uint64_t n, double p) {
        std::uint64_t k = 0;
        for (std::uint64_t i = 0; i < n; ++i) k += bernoulli(p);
        return k;
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace mipt
