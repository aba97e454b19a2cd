#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>
#include <random>

namespace turbolab {

/// Stateless 64-bit mixer used to derive independent stream seeds from a
/// master seed plus stream/frame indices. Results are identical on every
/// platform, which keeps simulations reproducible regardless of how frames
/// are scheduled.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

/// mt19937_64 plus explicit uniform/Gaussian transforms. std::*_distribution
/// output is not pinned by the standard, so the transforms are spelled out
/// here to make seeded runs bit-identical across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    int bit() { return static_cast<int>(eng_() & 1u); }

    /// Standard normal via Box-Muller; second sample of each pair is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace turbolab
