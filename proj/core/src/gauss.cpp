#include "s3bs/gauss.hpp"

#include <cmath>

#include "s3bs/errors.hpp"
#include "s3bs/geometry.hpp"

namespace s3bs {

GaussRule gauss_legendre(std::size_t n, double a, double b) {
    if (n == 0) throw InvalidSpec("gauss_legendre: need at least one node");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration on P_n from the Chebyshev guess.
        double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                const double jd = static_cast<double>(j);
                p0 = ((2.0 * jd - 1.0) * z * p1 - (jd - 1.0) * p2) / jd;
            }
            dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

}  // namespace s3bs
