#include "s3bs/potentials.hpp"

#include <cmath>
#include <string>

#include "s3bs/errors.hpp"
#include "s3bs/gauss.hpp"
#include "s3bs/geometry.hpp"

namespace s3bs {
namespace {

constexpr double kInv4Pi2 = 1.0 / (4.0 * kPi * kPi);

// sin(alpha) evaluated through the nearer endpoint so (pi - a)/sin(a) keeps
// full relative accuracy close to pi.
double stable_sin(double alpha) {
    return alpha < 0.5 * kPi ? std::sin(alpha) : std::sin(kPi - alpha);
}

double phi(double a, int order) {
    const double s = stable_sin(a);
    const double c = std::cos(a);
    const double m = kPi - a;
    switch (order) {
        case 0: return -kInv4Pi2 * m / s;
        case 1: return kInv4Pi2 * (1.0 / s + m * c / (s * s));
        default: return kInv4Pi2 * (-2.0 * c / (s * s) - m * (1.0 + c * c) / (s * s * s));
    }
}

double phi0(double a, int order) {
    const double s = stable_sin(a);
    const double c = std::cos(a);
    const double m = kPi - a;
    switch (order) {
        case 0: return -kInv4Pi2 * m * c / s;
        case 1: return kInv4Pi2 * (c / s + m / (s * s));
        default: return kInv4Pi2 * (-2.0 / (s * s) - 2.0 * m * c / (s * s * s));
    }
}

double phi1(double a, int order) {
    constexpr double k = 1.0 / (16.0 * kPi * kPi);
    switch (order) {
        case 0: return -k * a * (2.0 * kPi - a);
        case 1: return -2.0 * k * (kPi - a);
        default: return 2.0 * k;
    }
}

}  // namespace

double eval_potential(Potential kind, double alpha, int order) {
    if (order < 0 || order > 2) {
        throw DomainError("eval_potential: derivative order must be 0, 1 or 2");
    }
    if (!std::isfinite(alpha)) throw DomainError("eval_potential: non-finite alpha");
    switch (kind) {
        case Potential::phi:
        case Potential::phi0:
            if (alpha <= 0.0 || alpha >= kPi) {
                throw DomainError("eval_potential: alpha = " + std::to_string(alpha) +
                                  " outside (0, pi) for a singular potential");
            }
            return kind == Potential::phi ? phi(alpha, order) : phi0(alpha, order);
        case Potential::phi1:
            if (alpha < 0.0 || alpha > kPi) {
                throw DomainError("eval_potential: alpha outside [0, pi]");
            }
            return phi1(alpha, order);
    }
    return 0.0;
}

double laplacian_radial(Potential kind, double alpha) {
    if (alpha <= 0.0 || alpha >= kPi) {
        throw DomainError("laplacian_radial: alpha must lie in (0, pi)");
    }
    const double cot = std::cos(alpha) / stable_sin(alpha);
    return eval_potential(kind, alpha, 2) + 2.0 * cot * eval_potential(kind, alpha, 1);
}

double phi0_average() {
    static const double value = [] {
        // phi0 * sin^2 = -(pi - a) cos(a) sin(a) / (4 pi^2) is smooth on [0, pi].
        const GaussRule rule = gauss_legendre(64, 0.0, kPi);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double a = rule.nodes[i];
            sum += rule.weights[i] * (-kInv4Pi2 * (kPi - a) * std::cos(a) * std::sin(a));
        }
        return sum * 4.0 * kPi / (2.0 * kPi * kPi);
    }();
    return value;
}

}  // namespace s3bs
