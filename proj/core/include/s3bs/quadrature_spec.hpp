#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace s3bs {

enum class Backend { monte_carlo, stratified_grid };

std::string to_string(Backend b);
Backend backend_from_string(const std::string& name);

/// Parameters shared by every volume and boundary quadrature.
struct QuadratureSpec {
    Backend backend = Backend::monte_carlo;
    std::size_t n_samples = 100000;
    /// Geodesic radius removed around a singular evaluation point.
    double excision_radius = 0.02;
    std::uint64_t seed = 1;
    std::size_t batch_size = 4096;

    /// Throws InvalidSpec unless n_samples >= 1000, 0 <= excision < pi/4 and
    /// batch_size >= 1.
    void validate() const;
};

/// Execution settings; never affects numerical results.
struct Exec {
    int workers = default_workers();

    /// S3BS_WORKERS if set, otherwise the OpenMP default.
    static int default_workers();
};

}  // namespace s3bs
