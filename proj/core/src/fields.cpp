#include "s3bs/fields.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "s3bs/errors.hpp"

namespace s3bs {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string vec_string(const Vec4& v) {
    std::ostringstream os;
    os << '[' << v[0] << ", " << v[1] << ", " << v[2] << ", " << v[3] << ']';
    return os.str();
}

double sin_cos_distance(const Point& p, const Point& x, double& c) {
    c = std::clamp(dot(p.coords(), x.coords()), -1.0, 1.0);
    return std::sqrt(std::max(0.0, 1.0 - c * c));
}

}  // namespace

double ScalarField::operator()(const Point& x) const {
    return std::visit(
        overloaded{
            [](const Constant& f) { return f.c; },
            [&](const Linear& f) { return dot(x.coords(), f.e); },
            [&](const CosDistance& f) { return dot(f.center.coords(), x.coords()) - f.offset; },
            [&](const CotDistance& f) {
                double c = 0.0;
                const double s = sin_cos_distance(f.center, x, c);
                if (s < kPairEpsilon) throw DegeneratePair("cot-distance field evaluated at its center");
                return -f.coeff * c / s;
            },
        },
        d_);
}

TangentVector ScalarField::gradient(const Point& x) const {
    return std::visit(
        overloaded{
            [&](const Constant&) { return TangentVector(x, Vec4{}); },
            [&](const Linear& f) { return TangentVector(x, f.e); },
            // grad cos alpha = -sin(alpha) grad alpha = tangential part of p.
            [&](const CosDistance& f) { return TangentVector(x, f.center.coords()); },
            [&](const CotDistance& f) {
                double c = 0.0;
                const double s = sin_cos_distance(f.center, x, c);
                const TangentVector ga = grad_alpha(x, f.center, Slot::x);
                return TangentVector(x, ga.vec * (f.coeff / (s * s)));
            },
        },
        d_);
}

double ScalarField::laplacian(const Point& x) const {
    return std::visit(
        overloaded{
            [](const Constant&) { return 0.0; },
            // Coordinate functions are eigenfunctions with eigenvalue -3.
            [&](const Linear& f) { return -3.0 * dot(x.coords(), f.e); },
            [&](const CosDistance& f) { return -3.0 * dot(f.center.coords(), x.coords()); },
            [](const CotDistance&) { return 0.0; },
        },
        d_);
}

std::string ScalarField::describe() const {
    return std::visit(
        overloaded{
            [](const Constant& f) { return "const(" + std::to_string(f.c) + ")"; },
            [](const Linear& f) { return "linear(" + vec_string(f.e) + ")"; },
            [](const CosDistance& f) {
                return "cos_distance(" + vec_string(f.center.coords()) + ", " + std::to_string(f.offset) + ")";
            },
            [](const CotDistance& f) {
                return "cot_distance(" + vec_string(f.center.coords()) + ", " + std::to_string(f.coeff) + ")";
            },
        },
        d_);
}

TangentVector VectorField::operator()(const Point& x) const {
    return std::visit(
        overloaded{
            [&](const LeftInvariant& v) { return TangentVector(x, qmul(x.coords(), v.q)); },
            [&](const Gradient& g) { return g.f.gradient(x); },
            [&](const Longitude&) {
                const double rho2 = x[0] * x[0] + x[1] * x[1];
                if (rho2 < kPairEpsilon) throw DomainError("longitude field evaluated on its singular circle");
                return TangentVector(x, Vec4{-x[1], x[0], 0.0, 0.0} / rho2);
            },
            [&](const Combination& c) {
                Vec4 acc;
                for (const auto& t : c.terms) acc += t.coeff * (*t.field)(x).vec;
                return TangentVector(x, acc);
            },
            [&](const Pushforward& p) {
                const Point pre = Point::unchecked(qmul(conj(p.q.coords()), x.coords()));
                return TangentVector(x, qmul(p.q.coords(), (*p.inner)(pre).vec));
            },
        },
        d_);
}

double VectorField::divergence(const Point& x) const {
    return std::visit(
        overloaded{
            [](const LeftInvariant&) { return 0.0; },
            [&](const Gradient& g) { return g.f.laplacian(x); },
            [](const Longitude&) { return 0.0; },
            [&](const Combination& c) {
                double acc = 0.0;
                for (const auto& t : c.terms) acc += t.coeff * t.field->divergence(x);
                return acc;
            },
            [&](const Pushforward& p) {
                return p.inner->divergence(Point::unchecked(qmul(conj(p.q.coords()), x.coords())));
            },
        },
        d_);
}

TangentVector VectorField::curl(const Point& x) const {
    return std::visit(
        overloaded{
            [&](const LeftInvariant& v) { return TangentVector(x, -2.0 * qmul(x.coords(), v.q)); },
            [&](const Gradient&) { return TangentVector(x, Vec4{}); },
            [&](const Longitude&) { return TangentVector(x, Vec4{}); },
            [&](const Combination& c) {
                Vec4 acc;
                for (const auto& t : c.terms) acc += t.coeff * t.field->curl(x).vec;
                return TangentVector(x, acc);
            },
            // Left multiplication is an orientation-preserving isometry.
            [&](const Pushforward& p) {
                const Point pre = Point::unchecked(qmul(conj(p.q.coords()), x.coords()));
                return TangentVector(x, qmul(p.q.coords(), p.inner->curl(pre).vec));
            },
        },
        d_);
}

std::string VectorField::describe() const {
    return std::visit(
        overloaded{
            [](const LeftInvariant& v) { return "left_invariant(" + vec_string(v.q) + ")"; },
            [](const Gradient& g) { return "gradient(" + g.f.describe() + ")"; },
            [](const Longitude&) { return std::string("longitude_W"); },
            [](const Combination& c) {
                std::string s = "combination(";
                for (std::size_t i = 0; i < c.terms.size(); ++i) {
                    if (i) s += " + ";
                    s += std::to_string(c.terms[i].coeff) + "*" + c.terms[i].field->describe();
                }
                return s + ")";
            },
            [](const Pushforward& p) {
                return "pushforward(" + vec_string(p.q.coords()) + ", " + p.inner->describe() + ")";
            },
        },
        d_);
}

VectorField frame_field(int i) {
    if (i < 1 || i > 3) throw DomainError("frame_field: index must be 1, 2 or 3");
    return VectorField::LeftInvariant{unit_quaternion(static_cast<std::size_t>(i))};
}

VectorField gradient_field(const ScalarField& f) { return VectorField::Gradient{f}; }

VectorField longitude_field_W() { return VectorField::Longitude{}; }

VectorField combine(std::vector<std::pair<double, VectorField>> terms) {
    VectorField::Combination c;
    for (auto& [a, v] : terms) c.terms.push_back({a, std::make_shared<const VectorField>(std::move(v))});
    return c;
}

VectorField pushforward(const Point& q, const VectorField& v) {
    return VectorField::Pushforward{q, std::make_shared<const VectorField>(v)};
}

std::string to_string(HodgeClass c) {
    switch (c) {
        case HodgeClass::fluxless_knot: return "FK";
        case HodgeClass::harmonic_knot: return "HK";
        case HodgeClass::curly_gradient: return "CG";
        case HodgeClass::harmonic_gradient: return "HG";
        case HodgeClass::grounded_gradient: return "GG";
        case HodgeClass::knot: return "FK+HK";
        case HodgeClass::mixed: return "mixed";
    }
    return "mixed";
}

namespace {

bool same_point(const Point& a, const Point& b) { return norm(a.coords() - b.coords()) < 1e-12; }

bool is_torus_like(const Domain& d) {
    if (std::holds_alternative<Domain::SolidTorus>(d.shape())) return true;
    if (const auto* c = std::get_if<Domain::Complement>(&d.shape())) {
        return std::holds_alternative<Domain::SolidTorus>(c->of->shape());
    }
    return false;
}

HodgeClass lookup(const VectorField& v, const Domain& omega);

HodgeClass lookup_gradient(const ScalarField& f, const Domain& omega) {
    if (std::holds_alternative<ScalarField::Constant>(f.descriptor())) return HodgeClass::grounded_gradient;
    if (std::holds_alternative<Domain::FullSphere>(omega.shape())) {
        if (std::holds_alternative<ScalarField::CotDistance>(f.descriptor())) {
            throw UnknownClass("cot-distance gradient is singular inside the full sphere");
        }
        return HodgeClass::grounded_gradient;
    }
    if (const auto* cd = std::get_if<ScalarField::CosDistance>(&f.descriptor())) {
        if (const auto* b = std::get_if<Domain::Ball>(&omega.shape())) {
            if (same_point(b->center, cd->center) && std::abs(cd->offset - std::cos(b->radius)) < 1e-12) {
                return HodgeClass::grounded_gradient;
            }
        }
        return HodgeClass::mixed;
    }
    if (const auto* ct = std::get_if<ScalarField::CotDistance>(&f.descriptor())) {
        if (const auto* s = std::get_if<Domain::Shell>(&omega.shape())) {
            if (same_point(s->center, ct->center)) return HodgeClass::harmonic_gradient;
        }
        throw UnknownClass("cot-distance gradient is only catalogued on concentric shells");
    }
    return HodgeClass::mixed;
}

HodgeClass lookup(const VectorField& v, const Domain& omega) {
    return std::visit(
        overloaded{
            [&](const VectorField::LeftInvariant& li) {
                if (std::holds_alternative<Domain::FullSphere>(omega.shape())) return HodgeClass::fluxless_knot;
                // x q_1 = d/dtheta - d/dpsi is tangent to every torus r = const.
                if (is_torus_like(omega) && std::abs(li.q[2]) < 1e-14 && std::abs(li.q[3]) < 1e-14) {
                    return HodgeClass::knot;
                }
                return HodgeClass::mixed;
            },
            [&](const VectorField::Gradient& g) { return lookup_gradient(g.f, omega); },
            [&](const VectorField::Longitude&) {
                if (std::holds_alternative<Domain::SolidTorus>(omega.shape())) return HodgeClass::harmonic_knot;
                throw UnknownClass("longitude field is only catalogued on solid tori");
            },
            [&](const VectorField::Combination& c) {
                std::set<HodgeClass> tags;
                for (const auto& t : c.terms) {
                    if (t.coeff != 0.0) tags.insert(lookup(*t.field, omega));
                }
                if (tags.empty()) return HodgeClass::grounded_gradient;
                if (tags.size() == 1) return *tags.begin();
                const bool all_knots = std::all_of(tags.begin(), tags.end(), [](HodgeClass h) {
                    return h == HodgeClass::fluxless_knot || h == HodgeClass::harmonic_knot ||
                           h == HodgeClass::knot;
                });
                return all_knots ? HodgeClass::knot : HodgeClass::mixed;
            },
            [&](const VectorField::Pushforward& p) {
                try {
                    return lookup(*p.inner, omega.left_translated(inverse(p.q)));
                } catch (const DomainError&) {
                    throw UnknownClass("pushforward onto a solid torus is not catalogued");
                }
            },
        },
        v.descriptor());
}

// Potential of a gradient field, if the descriptor exposes one.
const ScalarField* potential_of(const VectorField& v) {
    if (const auto* g = std::get_if<VectorField::Gradient>(&v.descriptor())) return &g->f;
    return nullptr;
}

bool verify(const VectorField& v, const Domain& omega, HodgeClass tag) {
    constexpr double tol = 1e-8;
    constexpr std::size_t n_check = 64;
    QuadratureSpec spec;
    spec.n_samples = 1000;
    spec.seed = 0x686f6467;
    const Exec serial{1};

    const bool div_free = tag != HodgeClass::grounded_gradient;
    const bool tangent = tag == HodgeClass::fluxless_knot || tag == HodgeClass::harmonic_knot ||
                         tag == HodgeClass::knot;
    const bool curl_free = tag == HodgeClass::harmonic_knot || tag == HodgeClass::curly_gradient ||
                           tag == HodgeClass::harmonic_gradient || tag == HodgeClass::grounded_gradient;

    const auto vol = omega.sample_volume(spec, serial);
    for (std::size_t k = 0; k < std::min(n_check, vol.nodes.size()); ++k) {
        const Point& x = vol.nodes[k].point;
        const TangentVector vx = v(x);
        const double scale = 1.0 + vx.length();
        if (std::abs(dot(vx.vec, x.coords())) > tol * scale) return false;
        if (div_free && std::abs(v.divergence(x)) > tol * scale) return false;
        if (curl_free && v.curl(x).length() > tol * scale) return false;
    }
    if (!omega.has_boundary()) return true;

    const auto bnd = omega.sample_boundary(spec, serial);
    const ScalarField* f = potential_of(v);
    for (std::size_t k = 0; k < std::min(n_check, bnd.nodes.size()); ++k) {
        const BoundarySample& b = bnd.nodes[k];
        const TangentVector vx = v(b.point);
        const double scale = 1.0 + vx.length();
        if (tangent && std::abs(dot(vx.vec, b.normal.vec)) > tol * scale) return false;
        if (tag == HodgeClass::harmonic_gradient) {
            // Locally constant boundary values: the gradient is normal there.
            const Vec4 tang = vx.vec - dot(vx.vec, b.normal.vec) * b.normal.vec;
            if (norm(tang) > tol * scale) return false;
        }
        // A constant potential can be shifted to zero; its gradient is grounded.
        const bool constant = f != nullptr && std::holds_alternative<ScalarField::Constant>(f->descriptor());
        if (tag == HodgeClass::grounded_gradient && f != nullptr && !constant &&
            std::abs((*f)(b.point)) > tol * scale) {
            return false;
        }
    }
    return true;
}

}  // namespace

HodgeClass classify_hodge(const VectorField& v, const Domain& omega) {
    const HodgeClass tag = lookup(v, omega);
    if (tag == HodgeClass::mixed) return tag;
    return verify(v, omega, tag) ? tag : HodgeClass::mixed;
}

}  // namespace s3bs
