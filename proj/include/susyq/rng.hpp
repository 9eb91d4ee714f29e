#pragma once

#include <cmath>
#include <cstdint>

namespace susyq {

// Counter-based splitmix64 stream. Draw k of stream `seed` is a pure
// function of (seed, k), so shots can be evaluated in any order (or in
// parallel) and still reproduce bit-identical tallies.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t rng_draw(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index * 0xd1342543de82ef95ULL + 1));
}

// Uniform in [0, 1), 53-bit resolution.
inline double rng_uniform(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(rng_draw(seed, index) >> 11) * 0x1.0p-53;
}

// Sequential generator for bulk draws (couplings, random operators).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return splitmix64(state_++); }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Box-Muller; avoids implementation-defined std::normal_distribution.
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
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace susyq
