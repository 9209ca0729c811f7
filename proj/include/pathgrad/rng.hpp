#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pathgrad {

/// Deterministic random source. Every consumer takes an explicit stream, and
/// independent substreams are derived from (seed, index) so that trials and
/// Monte Carlo baselines can run in any order (or in parallel) without
/// changing the numbers.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(mix(seed, 0x9e3779b97f4a7c15ull)) {}

    /// splitmix64-style avalanche of (seed, index) into a fresh 64-bit state.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
        RandomStream rs(0);
        rs.gen_.seed(mix(seed, index));
        rs.have_spare_ = false;
        return rs;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Gaussian via Box-Muller; hand-rolled so results do not depend on the
    /// standard library's distribution implementation.
    double normal(double sigma) {
        if (have_spare_) {
            have_spare_ = false;
            return spare_ * sigma;
        }
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586476925286766559;
        spare_ = r * std::sin(two_pi * u2);
        have_spare_ = true;
        return r * std::cos(two_pi * u2) * sigma;
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pathgrad
