#pragma once

// Volume and boundary integration with deterministic batched reduction.
//
// Integrals with a kernel singular at an evaluation point y use a polar
// template: nodes z = cos a + sin a w (w an imaginary unit, a in [eps, pi])
// around the identity, carried to y by left multiplication x = y z. The
// volume element sin^2 a cancels the 1/a^2 kernel singularity, the excised
// ball B_eps(y) moves with y, and the same template can be reused for every
// stencil point of a finite-difference derivative in y.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "s3bs/domains.hpp"
#include "s3bs/geometry.hpp"
#include "s3bs/quadrature_spec.hpp"

namespace s3bs {

template <class T>
struct IntegralEstimate {
    T value{};
    /// Monte Carlo standard error, or |fine - coarse| for grids, plus any
    /// excision budget.
    double error_bound = 0.0;
    std::size_t n_used = 0;
};

using ScalarEstimate = IntegralEstimate<double>;
using VectorEstimate = IntegralEstimate<Vec4>;

struct PolarNode {
    Vec4 omega;  // imaginary unit quaternion
    double alpha = 0.0;
    double sin_a = 0.0;
    double cos_a = 0.0;
    double weight = 0.0;  // includes sin^2 a

    Vec4 z() const { return {cos_a, sin_a * omega[1], sin_a * omega[2], sin_a * omega[3]}; }
};
using PolarNodes = NodeSet<PolarNode>;

/// Nodes covering S^3 minus the ball of radius spec.excision_radius about the
/// identity.
PolarNodes polar_template(const QuadratureSpec& spec, const Exec& exec = {});

/// Componentwise integrals of a multi-valued integrand.
struct Accumulation {
    std::vector<double> value;
    std::vector<double> error;
    std::size_t n_used = 0;

    /// Error of components [first, first + count) combined as a vector norm.
    double error_norm(std::size_t first, std::size_t count) const;
};

template <class Node>
using NodeKernel = std::function<void(const Node&, double* out)>;

/// Sums weight * f(node) over the node set in fixed batches. Throws
/// NonFiniteIntegrand if any component is NaN or infinite.
template <class Node>
Accumulation accumulate(const NodeSet<Node>& nodes, std::size_t components, const NodeKernel<Node>& f,
                        std::size_t batch_size, const Exec& exec);

namespace detail {
inline void store(double v, double* out) { out[0] = v; }
inline void store(const Vec4& v, double* out) {
    for (std::size_t i = 0; i < 4; ++i) out[i] = v[i];
}
template <class T>
constexpr std::size_t width() {
    return std::is_same_v<T, double> ? 1 : 4;
}
template <class T>
IntegralEstimate<T> unpack(const Accumulation& a) {
    IntegralEstimate<T> e;
    if constexpr (std::is_same_v<T, double>) {
        e.value = a.value[0];
    } else {
        for (std::size_t i = 0; i < 4; ++i) e.value[i] = a.value[i];
    }
    e.error_bound = a.error_norm(0, width<T>());
    e.n_used = a.n_used;
    return e;
}
}  // namespace detail

/// Integrates f (returning double or Vec4) over arbitrary nodes.
template <class Node, class F>
auto integrate_nodes(const NodeSet<Node>& nodes, F&& f, const QuadratureSpec& spec, const Exec& exec = {}) {
    using T = std::decay_t<decltype(f(nodes.nodes.front()))>;
    const NodeKernel<Node> kernel = [&](const Node& n, double* out) { detail::store(f(n), out); };
    return detail::unpack<T>(accumulate(nodes, detail::width<T>(), kernel, spec.batch_size, exec));
}

/// Evaluation point of a singular integrand and the magnitude used for the
/// excision budget: the reported bound grows by excision_radius * scale,
/// which dominates the mass of a |grad phi|-type kernel times a field bounded
/// by `scale` over the excised ball.
struct SingularPoint {
    Point at;
    double scale = 1.0;
};

/// Integral of f over the domain. With `singular_at`, the polar template
/// centred there is used and the excised ball is skipped.
template <class F>
auto integrate_volume(const Domain& omega, F&& f, const QuadratureSpec& spec,
                      const std::optional<SingularPoint>& singular_at = std::nullopt, const Exec& exec = {}) {
    if (!singular_at) {
        const VolumeNodes nodes = omega.sample_volume(spec, exec);
        return integrate_nodes(nodes, [&](const WeightedPoint& n) { return f(n.point); }, spec, exec);
    }
    const PolarNodes nodes = polar_template(spec, exec);
    const Vec4 y = singular_at->at.coords();
    using T = std::decay_t<decltype(f(std::declval<const Point&>()))>;
    auto est = integrate_nodes(
        nodes,
        [&](const PolarNode& n) -> T {
            const Point x = Point::unchecked(qmul(y, n.z()));
            if (!omega.contains(x)) return T{};
            return f(x);
        },
        spec, exec);
    est.error_bound += spec.excision_radius * singular_at->scale;
    return est;
}

/// Integral over the boundary; f receives the point, outward normal and
/// area weight. Throws NoBoundary for the full sphere.
template <class F>
auto integrate_boundary(const Domain& omega, F&& f, const QuadratureSpec& spec, const Exec& exec = {}) {
    const BoundaryNodes nodes = omega.sample_boundary(spec, exec);
    return integrate_nodes(nodes, [&](const BoundarySample& b) { return f(b); }, spec, exec);
}

}  // namespace s3bs
