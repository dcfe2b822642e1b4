#include "s3bs/geometry.hpp"

#include <algorithm>
#include <string>

#include "s3bs/errors.hpp"

namespace s3bs {

Point::Point(const Vec4& v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw DomainError("Point: cannot normalize a zero or non-finite vector");
    }
    coords_ = v / n;
}

Point operator*(const Point& a, const Point& b) {
    return Point(qmul(a.coords(), b.coords()));
}

Point inverse(const Point& p) { return Point::unchecked(conj(p.coords())); }

TangentVector::TangentVector(const Point& b, const Vec4& v) : base(b), vec(tangent_part(b, v)) {}

Rotor::Rotor(const Vec4& q) {
    const double n = norm(q);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw DomainError("Rotor: quaternion must be nonzero and finite");
    }
    q_ = q / n;
}

Rotor Rotor::between(const Point& x, const Point& y) {
    return Rotor(qmul(y.coords(), conj(x.coords())));
}

double geodesic_distance(const Point& x, const Point& y) {
    return std::acos(std::clamp(dot(x.coords(), y.coords()), -1.0, 1.0));
}

TangentVector grad_alpha(const Point& x, const Point& y, Slot which, double eps) {
    const double c = std::clamp(dot(x.coords(), y.coords()), -1.0, 1.0);
    const double alpha = std::acos(c);
    if (alpha < eps || alpha > kPi - eps) {
        throw DegeneratePair("grad_alpha: points are coincident or antipodal (alpha = " +
                             std::to_string(alpha) + ")");
    }
    const double s = std::sin(alpha);
    if (which == Slot::x) {
        return TangentVector(x, (x.coords() * c - y.coords()) / s);
    }
    return TangentVector(y, (y.coords() * c - x.coords()) / s);
}

TangentVector parallel_transport(const TangentVector& v, const Point& y, double eps) {
    const Vec4& x = v.base.coords();
    const double denom = 1.0 + dot(x, y.coords());
    if (denom < eps) {
        throw AntipodalPair("parallel_transport: target is antipodal to the base point");
    }
    const double vy = dot(v.vec, y.coords());
    return TangentVector(y, v.vec - (vy / denom) * (x + y.coords()));
}

TangentVector left_translate(const TangentVector& v, const Point& y) {
    return TangentVector(y, Rotor::between(v.base, y).apply(v.vec));
}

Vec4 perp_component(const Vec4& c, const Vec4& a, const Vec4& b, double eps) {
    const double aa = dot(a, a);
    const double bb = dot(b, b);
    const double ab = dot(a, b);
    const double gram = aa * bb - ab * ab;
    // gram = |A|^2 |B|^2 sin^2(angle)
    if (!(aa > 0.0) || !(bb > 0.0) || gram <= eps * eps * aa * bb) {
        throw DegenerateSpan("perp_component: A and B are (nearly) linearly dependent");
    }
    const double ac = dot(a, c);
    const double bc = dot(b, c);
    const double ka = (ac * bb - bc * ab) / gram;
    const double kb = (bc * aa - ac * ab) / gram;
    return c - ka * a - kb * b;
}

}  // namespace s3bs
