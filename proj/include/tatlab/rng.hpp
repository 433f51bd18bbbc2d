#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tatlab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic Gaussian stream. Uses an explicit uniform mapping and the
/// trigonometric Box-Muller transform instead of std::normal_distribution,
/// whose output is implementation-defined.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    /// Stable per-member stream derivation: (master, stream, member) -> seed.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t stream,
                                std::uint64_t member) {
        std::uint64_t s = master;
        (void)splitmix64(s);
        s ^= 0x517cc1b727220a95ULL * (stream + 1);
        (void)splitmix64(s);
        s ^= 0x2545f4914f6cdd1dULL * (member + 1);
        return splitmix64(s);
    }

    double uniform01() {  // in [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double gauss() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace tatlab
