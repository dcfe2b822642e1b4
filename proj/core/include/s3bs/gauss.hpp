#pragma once

#include <cstddef>
#include <vector>

namespace s3bs {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(std::size_t n, double a, double b);

}  // namespace s3bs
