#pragma once

// Analytic scalar and vector fields on S^3 used as inputs to the operators.
// Every field carries closed-form derivative information so numerical
// derivatives can be checked against it.

#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "s3bs/domains.hpp"
#include "s3bs/geometry.hpp"

namespace s3bs {

class ScalarField {
public:
    struct Constant {
        double c;
    };
    /// f(x) = x . e
    struct Linear {
        Vec4 e;
    };
    /// f(x) = cos alpha(p, x) - offset
    struct CosDistance {
        Point center;
        double offset;
    };
    /// f(x) = -coeff * cot alpha(p, x); harmonic away from p and -p.
    struct CotDistance {
        Point center;
        double coeff;
    };
    using Descriptor = std::variant<Constant, Linear, CosDistance, CotDistance>;

    template <class D>
        requires std::is_constructible_v<Descriptor, D>
    ScalarField(D d) : d_(std::move(d)) {}  // NOLINT(implicit)

    const Descriptor& descriptor() const { return d_; }

    double operator()(const Point& x) const;
    TangentVector gradient(const Point& x) const;
    double laplacian(const Point& x) const;
    std::string describe() const;

private:
    Descriptor d_;
};

class VectorField {
public:
    /// V(x) = x q for an imaginary quaternion q.
    struct LeftInvariant {
        Vec4 q;
    };
    struct Gradient {
        ScalarField f;
    };
    /// W = grad(theta) in solid-torus coordinates; singular on x1 = x2 = 0.
    struct Longitude {};
    struct Term {
        double coeff;
        std::shared_ptr<const VectorField> field;
    };
    struct Combination {
        std::vector<Term> terms;
    };
    /// (L_q)_* V: x -> q V(q^{-1} x).
    struct Pushforward {
        Point q;
        std::shared_ptr<const VectorField> inner;
    };
    using Descriptor = std::variant<LeftInvariant, Gradient, Longitude, Combination, Pushforward>;

    template <class D>
        requires std::is_constructible_v<Descriptor, D>
    VectorField(D d) : d_(std::move(d)) {}  // NOLINT(implicit)

    const Descriptor& descriptor() const { return d_; }

    TangentVector operator()(const Point& x) const;
    /// Closed-form divergence and curl.
    double divergence(const Point& x) const;
    TangentVector curl(const Point& x) const;
    std::string describe() const;

private:
    Descriptor d_;
};

/// u_i(x) = x q_i, i in {1, 2, 3}.
VectorField frame_field(int i);
VectorField gradient_field(const ScalarField& f);
VectorField longitude_field_W();
VectorField combine(std::vector<std::pair<double, VectorField>> terms);
VectorField pushforward(const Point& q, const VectorField& v);

enum class HodgeClass {
    fluxless_knot,     // FK
    harmonic_knot,     // HK
    curly_gradient,    // CG
    harmonic_gradient, // HG
    grounded_gradient, // GG
    knot,              // FK + HK: divergence-free and tangent to the boundary
    mixed,
};

std::string to_string(HodgeClass c);

/// Catalog lookup of the class of V on the domain, confirmed by pointwise
/// checks (divergence, normal component, curl, boundary values). Returns
/// `mixed` when the lookup has no single class or the checks disagree;
/// throws UnknownClass for fields the catalog does not cover on that domain.
HodgeClass classify_hodge(const VectorField& v, const Domain& omega);

/// True for classes on which the Biot-Savart operator vanishes.
inline bool in_bs_kernel(HodgeClass c) {
    return c == HodgeClass::harmonic_gradient || c == HodgeClass::grounded_gradient;
}

}  // namespace s3bs
