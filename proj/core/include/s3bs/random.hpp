#pragma once

#include <cstdint>
#include <random>

#include "s3bs/geometry.hpp"

namespace s3bs {

/// Stream tags keep node sets drawn from the same seed independent.
enum class StreamTag : std::uint64_t {
    volume = 0x766f6c,
    boundary = 0x626e64,
    polar = 0x706f6c,
    probes = 0x707262,
};

/// Random sub-stream fully determined by (seed, tag, index). Each quadrature
/// batch owns one, so results do not depend on scheduling.
class SubStream {
public:
    SubStream(std::uint64_t seed, StreamTag tag, std::uint64_t index);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform direction on the unit 2-sphere, returned as an imaginary quaternion.
    Vec4 sphere_direction();

    /// Uniform point of S^3 via Hopf coordinates.
    Point s3_uniform();

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace s3bs
