#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

/**
 * Deterministic random streams.
 *
 * Every noise consumer gets its own stream, derived from the master seed and
 * a stable string label: stream_seed = mix(master ^ fnv1a64(label)). Streams
 * are therefore independent of each other and of the order in which they are
 * created, so wiring a new consumer into the simulation never perturbs the
 * draws seen by existing ones.
 */
namespace flotilla {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Gaussian draw via Box-Muller; consumes exactly two uniforms.
    double gaussian(double mean, double sigma) {
        double u1 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::uint64_t state_;
};

/// Factory for label-derived substreams of a master seed.
class NoiseStreams {
public:
    explicit NoiseStreams(std::uint64_t master) : master_(master) {}

    SplitMix64 stream(std::string_view label) const {
        std::uint64_t s = master_ ^ fnv1a64(label);
        // One extra scramble so label hashes and master bits diffuse fully.
        s ^= s >> 33;
        s *= 0xFF51AFD7ED558CCDull;
        s ^= s >> 33;
        return SplitMix64(s);
    }

    std::uint64_t master() const { return master_; }

private:
    std::uint64_t master_;
};

}  // namespace flotilla
