#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wavesel {

/// splitmix64 finalizer. Used to derive statistically independent substream
/// seeds from a master seed and a stream index.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Substream seed for stream `index` under `master`. The same (master, index)
/// pair always yields the same seed, independent of evaluation order.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Deterministic random source. Wraps std::mt19937_64, whose output sequence
/// is pinned by the standard, and maps raw 64-bit draws to doubles/ints with
/// fixed arithmetic so results are identical across platforms and compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Unbiased uniform integer in [0, n). Rejection sampling on the raw
    /// 64-bit stream keeps the distribution exact.
    std::uint64_t uniform_int(std::uint64_t n) {
        std::uint64_t x = 0;
        std::uint64_t r = 0;
        do {
            x = eng_();
            r = x % n;
        } while (x - r > std::uint64_t(0) - n);
        return r;
    }

    /// Standard normal via Box-Muller on the deterministic uniform stream.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586477 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace wavesel
