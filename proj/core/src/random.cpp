#include "s3bs/random.hpp"

#include <algorithm>
#include <cmath>

namespace s3bs {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SubStream::SubStream(std::uint64_t seed, StreamTag tag, std::uint64_t index)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(tag)) ^
                         splitmix64(splitmix64(index)))) {}

Vec4 SubStream::sphere_direction() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * kPi);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {0.0, rho * std::cos(phi), rho * std::sin(phi), z};
}


Point SubStream::s3_uniform() {
    const double u = uniform();
    const double theta = uniform(0.0, 2.0 * kPi);
    const double psi = uniform(0.0, 2.0 * kPi);
    // sin^2 r uniform on [0, 1] gives the cos r sin r density.
    const double sr = std::sqrt(u);
    const double cr = std::sqrt(1.0 - u);
    return Point::unchecked(
        {cr * std::cos(theta), cr * std::sin(theta), sr * std::cos(psi), sr * std::sin(psi)});
}

}  // namespace s3bs
