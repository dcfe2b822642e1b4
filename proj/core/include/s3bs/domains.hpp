#pragma once

// Closed-form compact subdomains of S^3.
//
// Solid tori use the coordinates
//   x = (cos r cos t, cos r sin t, sin r cos s, sin r sin s),  r in [0, pi/2],
// with volume element cos r sin r dr dt ds; the core circle is r = 0.

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "s3bs/geometry.hpp"
#include "s3bs/quadrature_spec.hpp"

namespace s3bs {

inline constexpr double kS3Volume = 2.0 * kPi * kPi;

struct WeightedPoint {
    Point point;
    double weight = 0.0;
};

struct BoundarySample {
    Point point;
    TangentVector normal;  // outward unit normal
    double area_weight = 0.0;
};

/// Quadrature nodes for one domain. Monte Carlo node sets hold one entry per
/// independent draw (rejected proposals keep weight 0); grid node sets carry
/// a coarser companion rule used for the error estimate.
template <class Node>
struct NodeSet {
    Backend backend = Backend::monte_carlo;
    std::vector<Node> nodes;
    std::vector<Node> coarse;
};

using VolumeNodes = NodeSet<WeightedPoint>;
using BoundaryNodes = NodeSet<BoundarySample>;

class Domain {
public:
    struct FullSphere {};
    struct Ball {
        Point center;
        double radius;
    };
    struct Shell {
        Point center;
        double inner;
        double outer;
    };
    struct SolidTorus {
        double a;
    };
    struct Complement {
        std::shared_ptr<const Domain> of;
    };
    using Shape = std::variant<FullSphere, Ball, Shell, SolidTorus, Complement>;

    static Domain full_sphere();
    static Domain ball(const Point& center, double radius);
    static Domain shell(const Point& center, double inner, double outer);
    static Domain solid_torus(double a);
    /// complement(complement(D)) returns D itself.
    static Domain complement(const Domain& d);

    const Shape& shape() const { return shape_; }

    bool contains(const Point& x) const;
    double volume() const { return volume_; }
    bool has_boundary() const;
    double boundary_area() const;

    /// Geodesic distance from x to the boundary (infinity for the full sphere).
    double distance_to_boundary(const Point& x) const;

    /// Image under left multiplication by q. Solid tori are not supported.
    Domain left_translated(const Point& q) const;

    VolumeNodes sample_volume(const QuadratureSpec& spec, const Exec& exec = {}) const;
    BoundaryNodes sample_boundary(const QuadratureSpec& spec, const Exec& exec = {}) const;

    /// Torus radial coordinate: distance to the circle x3 = x4 = 0.
    static double torus_radius(const Point& x);

private:
    explicit Domain(Shape s);

    Shape shape_;
    double volume_ = kS3Volume;
};

}  // namespace s3bs
