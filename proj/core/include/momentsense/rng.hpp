#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace momentsense {

// splitmix64 step; used for seeding and for stable hash combining.
inline std::uint64_t splitmix64_next(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based RNG stream: one stream per Monte Carlo trial. The generator
// is xoshiro256** seeded through splitmix64(seed, stream), so streams with
// different ids are statistically independent and the whole scheme is
// bit-reproducible across platforms and thread counts (the standard library
// does not pin its distribution algorithms, so we roll our own normal draw).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t x = seed;
        (void)splitmix64_next(x);
        x ^= 0xa0761d6478bd642fULL + stream * 0xe7037ed1a0b428dbULL;
        for (auto& word : state_) word = splitmix64_next(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on {0, ..., bound-1}, unbiased via rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % bound;
    }

    // Standard normal via Marsaglia's polar method (one spare cached).
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, r2;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            r2 = u * u + v * v;
        } while (r2 >= 1.0 || r2 == 0.0);
        const double f = std::sqrt(-2.0 * std::log(r2) / r2);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // ZMCSCG sample: independent N(0, sigma2) per component.
    std::complex<double> next_cnormal(double sigma2) {
        const double s = std::sqrt(sigma2);
        const double re = s * next_normal();
        const double im = s * next_normal();
        return {re, im};
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stable hash combine for deterministic per-cell seeding: adding sweep values
// must never perturb the seeds of existing cells. The first argument runs
// through the splitmix mixer before the xor-add so that two low-entropy
// inputs (small integers on both sides) still land on distinct outputs.
inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a;
    const std::uint64_t mixed = splitmix64_next(x);
    x = mixed ^ (0x9e3779b97f4a7c15ULL + b);
    (void)splitmix64_next(x);
    return splitmix64_next(x);
}

}  // namespace momentsense
