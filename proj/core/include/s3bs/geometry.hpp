#pragma once

// Quaternion model of the unit 3-sphere.
//
// Points are unit quaternions (a, b, c, d) <-> a + bi + cj + dk embedded in R^4.
// Tangent vectors at x are R^4 vectors orthogonal to x. Cross products in
// T_x S^3 are triple products [x, B, C], oriented so that the left-invariant
// frame u_i(x) = x q_i satisfies [x, u_1, u_2] = u_3.

#include <array>
#include <cmath>
#include <cstddef>

namespace s3bs {

inline constexpr double kPi = 3.14159265358979323846;

/// Cutoff on sin(alpha) and on 1 + x.y below which pair operations refuse to run.
inline constexpr double kPairEpsilon = 1e-8;

struct Vec4 {
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

    constexpr Vec4() = default;
    constexpr Vec4(double a, double b, double cc, double d) : c{a, b, cc, d} {}

    constexpr double& operator[](std::size_t i) { return c[i]; }
    constexpr double operator[](std::size_t i) const { return c[i]; }

    constexpr Vec4& operator+=(const Vec4& o) {
        for (std::size_t i = 0; i < 4; ++i) c[i] += o.c[i];
        return *this;
    }
    constexpr Vec4& operator-=(const Vec4& o) {
        for (std::size_t i = 0; i < 4; ++i) c[i] -= o.c[i];
        return *this;
    }
    constexpr Vec4& operator*=(double s) {
        for (auto& v : c) v *= s;
        return *this;
    }
    constexpr Vec4& operator/=(double s) {
        for (auto& v : c) v /= s;
        return *this;
    }

    static constexpr Vec4 basis(std::size_t i) {
        Vec4 v;
        v.c[i] = 1.0;
        return v;
    }
};

constexpr Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
constexpr Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
constexpr Vec4 operator-(Vec4 a) { return a *= -1.0; }
constexpr Vec4 operator*(Vec4 a, double s) { return a *= s; }
constexpr Vec4 operator*(double s, Vec4 a) { return a *= s; }
constexpr Vec4 operator/(Vec4 a, double s) { return a /= s; }

constexpr double dot(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
inline double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }

/// Hamilton product a * b.
constexpr Vec4 qmul(const Vec4& a, const Vec4& b) {
    return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}
constexpr Vec4 conj(const Vec4& a) { return {a[0], -a[1], -a[2], -a[3]}; }

/// Imaginary units i, j, k for index 1..3; index 0 is the real unit.
constexpr Vec4 unit_quaternion(std::size_t i) { return Vec4::basis(i); }

/// Formal determinant with rows A, B, C and the standard basis; orthogonal to
/// all three arguments and zero when they are dependent.
constexpr Vec4 triple_product(const Vec4& a, const Vec4& b, const Vec4& c) {
    // Minors of the 3x4 matrix [a; b; c] with column k deleted.
    auto minor = [&](std::size_t i, std::size_t j, std::size_t k) {
        return a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) +
               a[k] * (b[i] * c[j] - b[j] * c[i]);
    };
    return {-minor(1, 2, 3), minor(0, 2, 3), -minor(0, 1, 3), minor(0, 1, 2)};
}

/// A unit quaternion regarded as a point of S^3.
class Point {
public:
    Point() = default;

    /// Normalizes `v`; throws DomainError on a zero or non-finite vector.
    explicit Point(const Vec4& v);

    const Vec4& coords() const { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }

    Point antipode() const { return Point::unchecked(-coords_); }

    /// Wraps an already-unit vector without renormalizing.
    static Point unchecked(const Vec4& v) {
        Point p;
        p.coords_ = v;
        return p;
    }

    static Point identity() { return Point::unchecked({1.0, 0.0, 0.0, 0.0}); }

private:
    Vec4 coords_{1.0, 0.0, 0.0, 0.0};
};

/// Group product of two points; the result is renormalized.
Point operator*(const Point& a, const Point& b);
Point inverse(const Point& p);

/// Vector `vec` in the tangent space at `base`; the constructor projects out
/// the normal component.
struct TangentVector {
    Point base;
    Vec4 vec;

    TangentVector() = default;
    TangentVector(const Point& b, const Vec4& v);

    double length() const { return norm(vec); }
};

/// Unit quaternion acting on R^4 by left multiplication.
class Rotor {
public:
    Rotor() = default;
    explicit Rotor(const Vec4& q);

    /// The rotor y x^{-1}, which carries x to y.
    static Rotor between(const Point& x, const Point& y);

    const Vec4& quaternion() const { return q_; }
    Vec4 apply(const Vec4& v) const { return qmul(q_, v); }
    Point apply(const Point& p) const { return Point::unchecked(qmul(q_, p.coords())); }

private:
    Vec4 q_{1.0, 0.0, 0.0, 0.0};
};

enum class Slot { x, y };

/// Geodesic distance alpha = arccos(x.y), clamped to [0, pi].
double geodesic_distance(const Point& x, const Point& y);

/// Unit gradient of alpha(x, y) in the chosen slot. At x this is
/// (x cos a - y) / sin a, pointing away from y.
TangentVector grad_alpha(const Point& x, const Point& y, Slot which,
                         double eps = kPairEpsilon);

/// Parallel transport along the minimal geodesic from v.base to y.
TangentVector parallel_transport(const TangentVector& v, const Point& y,
                                 double eps = kPairEpsilon);

/// Transport by the differential of left multiplication with y x^{-1}.
TangentVector left_translate(const TangentVector& v, const Point& y);

/// Cross product in T_x S^3.
inline Vec4 cross_at(const Point& x, const Vec4& b, const Vec4& c) {
    return triple_product(x.coords(), b, c);
}

/// C minus its orthogonal projection onto span(A, B).
Vec4 perp_component(const Vec4& c, const Vec4& a, const Vec4& b, double eps = kPairEpsilon);

/// Projection of an ambient vector onto T_x S^3.
inline Vec4 tangent_part(const Point& x, const Vec4& v) {
    return v - dot(v, x.coords()) * x.coords();
}

/// Point reached after time t along the flow of the left-invariant field x q_i.
inline Point frame_flow(const Point& x, std::size_t i, double t) {
    const Vec4 step{std::cos(t), 0.0, 0.0, 0.0};
    Vec4 e = step;
    e[i] = std::sin(t);
    return Point::unchecked(qmul(x.coords(), e));
}

/// Left-invariant frame vector u_i(x) = x q_i, i in {1, 2, 3}.
inline Vec4 frame_vector(const Point& x, std::size_t i) {
    return qmul(x.coords(), unit_quaternion(i));
}

}  // namespace s3bs
