#pragma once

#include <cstdint>
#include <cmath>

namespace princurve {

/// Algorithm name recorded in run manifests.
inline constexpr const char* kRngAlgorithm = "splitmix64";

/// splitmix64 finalizer (Steele/Lea/Flood). Used both as the stream mixer
/// and for deriving substream keys.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Key for an independent substream. Streams with distinct ids never overlap
/// in practice (full 64-bit avalanche on both inputs).
inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed ^ mix64(stream ^ 0x5851F42D4C957F2DULL));
}

/// splitmix64 sequential generator. The k-th output is a pure function of
/// (initial state, k), so prefixes of a stream are stable.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; safe as a log() argument.
    double next_unit_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Box-Muller pair: z0 = r cos(2*pi*u2), z1 = r sin(2*pi*u2),
    /// r = sqrt(-2 ln u1). Consumes exactly two uniforms.
    void next_gaussian_pair(double& z0, double& z1) {
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        z0 = r * std::cos(a);
        z1 = r * std::sin(a);
    }

    double next_gaussian() {
        double z0, z1;
        next_gaussian_pair(z0, z1);
        return z0;
    }

private:
    std::uint64_t state_;
};

}  // namespace princurve
