#include "s3bs/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "s3bs/errors.hpp"
#include "s3bs/gauss.hpp"
#include "s3bs/random.hpp"

namespace s3bs {
namespace {

// Every shape decomposes into pieces that admit exact sampling: geodesic
// annuli {lo <= alpha(p, x) <= hi} and torus slabs {lo <= r <= hi}.
struct RadialPiece {
    Point center;
    double lo;
    double hi;
};
struct TorusPiece {
    double lo;
    double hi;
};
using Piece = std::variant<RadialPiece, TorusPiece>;

double annulus_volume(double lo, double hi) {
    auto f = [](double r) { return r - std::sin(r) * std::cos(r); };
    return 2.0 * kPi * (f(hi) - f(lo));
}

double slab_volume(double lo, double hi) {
    return 2.0 * kPi * kPi * (std::sin(hi) * std::sin(hi) - std::sin(lo) * std::sin(lo));
}

double piece_volume(const Piece& p) {
    return std::visit(
        [](const auto& q) {
            if constexpr (std::is_same_v<std::decay_t<decltype(q)>, RadialPiece>) {
                return annulus_volume(q.lo, q.hi);
            } else {
                return slab_volume(q.lo, q.hi);
            }
        },
        p);
}

struct SpherePiece {
    Point center;
    double radius;
    double orientation;
};
struct TorusSurface {
    double a;
    double orientation;
};
using Surface = std::variant<SpherePiece, TorusSurface>;

double surface_area(const Surface& s) {
    if (const auto* sp = std::get_if<SpherePiece>(&s)) {
        const double sr = std::sin(sp->radius);
        return 4.0 * kPi * sr * sr;
    }
    const auto& t = std::get<TorusSurface>(s);
    return 4.0 * kPi * kPi * std::sin(t.a) * std::cos(t.a);
}

std::vector<Piece> pieces_of(const Domain& d) {
    return std::visit(
        [&](const auto& s) -> std::vector<Piece> {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Domain::FullSphere>) {
                return {TorusPiece{0.0, 0.5 * kPi}};
            } else if constexpr (std::is_same_v<S, Domain::Ball>) {
                return {RadialPiece{s.center, 0.0, s.radius}};
            } else if constexpr (std::is_same_v<S, Domain::Shell>) {
                return {RadialPiece{s.center, s.inner, s.outer}};
            } else if constexpr (std::is_same_v<S, Domain::SolidTorus>) {
                return {TorusPiece{0.0, s.a}};
            } else {
                return std::visit(
                    [&](const auto& inner) -> std::vector<Piece> {
                        using I = std::decay_t<decltype(inner)>;
                        if constexpr (std::is_same_v<I, Domain::Ball>) {
                            return {RadialPiece{inner.center.antipode(), 0.0, kPi - inner.radius}};
                        } else if constexpr (std::is_same_v<I, Domain::Shell>) {
                            return {RadialPiece{inner.center, 0.0, inner.inner},
                                    RadialPiece{inner.center.antipode(), 0.0, kPi - inner.outer}};
                        } else if constexpr (std::is_same_v<I, Domain::SolidTorus>) {
                            return {TorusPiece{inner.a, 0.5 * kPi}};
                        } else {
                            throw DomainError("complement: unsupported nesting");
                        }
                    },
                    s.of->shape());
            }
        },
        d.shape());
}

std::vector<Surface> surfaces_of(const Domain& d) {
    return std::visit(
        [&](const auto& s) -> std::vector<Surface> {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Domain::FullSphere>) {
                throw NoBoundary("the full sphere has no boundary");
            } else if constexpr (std::is_same_v<S, Domain::Ball>) {
                return {SpherePiece{s.center, s.radius, 1.0}};
            } else if constexpr (std::is_same_v<S, Domain::Shell>) {
                return {SpherePiece{s.center, s.outer, 1.0}, SpherePiece{s.center, s.inner, -1.0}};
            } else if constexpr (std::is_same_v<S, Domain::SolidTorus>) {
                return {TorusSurface{s.a, 1.0}};
            } else {
                auto out = surfaces_of(*s.of);
                for (auto& surf : out) {
                    std::visit([](auto& q) { q.orientation = -q.orientation; }, surf);
                }
                return out;
            }
        },
        d.shape());
}

Point torus_point(double r, double t, double s) {
    const double cr = std::cos(r);
    const double sr = std::sin(r);
    return Point::unchecked({cr * std::cos(t), cr * std::sin(t), sr * std::cos(s), sr * std::sin(s)});
}

Vec4 torus_radial_direction(double r, double t, double s) {
    const double cr = std::cos(r);
    const double sr = std::sin(r);
    return {-sr * std::cos(t), -sr * std::sin(t), cr * std::cos(s), cr * std::sin(s)};
}

// p * (cos a + sin a w) for an imaginary unit w.
Point radial_point(const Point& p, double alpha, const Vec4& w) {
    const Vec4 z{std::cos(alpha), std::sin(alpha) * w[1], std::sin(alpha) * w[2],
                 std::sin(alpha) * w[3]};
    return Point::unchecked(qmul(p.coords(), z));
}

double max_sin2(double lo, double hi) {
    if (lo <= 0.5 * kPi && hi >= 0.5 * kPi) return 1.0;
    return std::max(std::sin(lo) * std::sin(lo), std::sin(hi) * std::sin(hi));
}

Point draw_in_piece(const Piece& piece, SubStream& rng) {
    if (const auto* rp = std::get_if<RadialPiece>(&piece)) {
        const double cap = max_sin2(rp->lo, rp->hi);
        double alpha = 0.0;
        for (;;) {
            alpha = rng.uniform(rp->lo, rp->hi);
            const double s = std::sin(alpha);
            if (rng.uniform() * cap <= s * s) break;
        }
        return radial_point(rp->center, alpha, rng.sphere_direction());
    }
    const auto& tp = std::get<TorusPiece>(piece);
    const double s2lo = std::sin(tp.lo) * std::sin(tp.lo);
    const double s2hi = std::sin(tp.hi) * std::sin(tp.hi);
    const double u = rng.uniform();
    const double r = std::asin(std::sqrt(s2lo + u * (s2hi - s2lo)));
    return torus_point(r, rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi));
}

BoundarySample draw_on_surface(const Surface& surf, SubStream& rng, double weight) {
    if (const auto* sp = std::get_if<SpherePiece>(&surf)) {
        const Vec4 w = rng.sphere_direction();
        const Point x = radial_point(sp->center, sp->radius, w);
        const Vec4 n = (x.coords() * std::cos(sp->radius) - sp->center.coords()) / std::sin(sp->radius);
        return {x, TangentVector(x, sp->orientation * n), weight};
    }
    const auto& ts = std::get<TorusSurface>(surf);
    const double t = rng.uniform(0.0, 2.0 * kPi);
    const double s = rng.uniform(0.0, 2.0 * kPi);
    const Point x = torus_point(ts.a, t, s);
    return {x, TangentVector(x, ts.orientation * torus_radial_direction(ts.a, t, s)), weight};
}

template <class Node, class Pick>
std::vector<Node> monte_carlo_nodes(std::size_t n, const QuadratureSpec& spec, StreamTag tag,
                                    const Exec& exec, Pick&& pick) {
    std::vector<Node> nodes(n);
    const std::size_t bs = spec.batch_size;
    const auto nb = static_cast<long>((n + bs - 1) / bs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(exec.workers)
    for (long b = 0; b < nb; ++b) {
        SubStream rng(spec.seed, tag, static_cast<std::uint64_t>(b));
        const std::size_t end = std::min(n, (static_cast<std::size_t>(b) + 1) * bs);
        for (std::size_t i = static_cast<std::size_t>(b) * bs; i < end; ++i) nodes[i] = pick(rng);
    }
    return nodes;
}

// Index of the mixture component selected by u in [0, 1).
std::size_t choose(const std::vector<double>& cumulative, double u) {
    const double target = u * cumulative.back();
    for (std::size_t i = 0; i + 1 < cumulative.size(); ++i) {
        if (target < cumulative[i]) return i;
    }
    return cumulative.size() - 1;
}

struct SphereGrid {
    std::vector<Vec4> dirs;
    std::vector<double> weights;  // sums to 4 pi
};

SphereGrid sphere_grid(std::size_t m) {
    SphereGrid g;
    const GaussRule zr = gauss_legendre(m, -1.0, 1.0);
    const std::size_t np = 2 * m;
    for (std::size_t i = 0; i < m; ++i) {
        const double z = zr.nodes[i];
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (std::size_t j = 0; j < np; ++j) {
            const double ph = 2.0 * kPi * (static_cast<double>(j) + 0.5) / static_cast<double>(np);
            g.dirs.push_back({0.0, rho * std::cos(ph), rho * std::sin(ph), z});
            g.weights.push_back(zr.weights[i] * 2.0 * kPi / static_cast<double>(np));
        }
    }
    return g;
}

void append_grid(const Piece& piece, std::size_t n_target, std::vector<WeightedPoint>& out) {
    if (const auto* rp = std::get_if<RadialPiece>(&piece)) {
        const auto m = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::lround(std::cbrt(static_cast<double>(n_target) / 2.0))));
        const GaussRule ar = gauss_legendre(m, rp->lo, rp->hi);
        const SphereGrid sg = sphere_grid(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double s = std::sin(ar.nodes[i]);
            for (std::size_t j = 0; j < sg.dirs.size(); ++j) {
                out.push_back({radial_point(rp->center, ar.nodes[i], sg.dirs[j]),
                               ar.weights[i] * s * s * sg.weights[j]});
            }
        }
        return;
    }
    const auto& tp = std::get<TorusPiece>(piece);
    const auto m = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::lround(std::cbrt(static_cast<double>(n_target) / 4.0))));
    const GaussRule rr = gauss_legendre(m, tp.lo, tp.hi);
    const std::size_t na = 2 * m;
    const double da = 2.0 * kPi / static_cast<double>(na);
    for (std::size_t i = 0; i < m; ++i) {
        const double r = rr.nodes[i];
        const double w = rr.weights[i] * std::cos(r) * std::sin(r) * da * da;
        for (std::size_t j = 0; j < na; ++j) {
            for (std::size_t k = 0; k < na; ++k) {
                out.push_back({torus_point(r, (static_cast<double>(j) + 0.5) * da,
                                           (static_cast<double>(k) + 0.5) * da),
                               w});
            }
        }
    }
}

void append_surface_grid(const Surface& surf, std::size_t n_target, std::vector<BoundarySample>& out) {
    if (const auto* sp = std::get_if<SpherePiece>(&surf)) {
        const auto m = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n_target) / 2.0))));
        const SphereGrid sg = sphere_grid(m);
        const double sr = std::sin(sp->radius);
        for (std::size_t j = 0; j < sg.dirs.size(); ++j) {
            const Point x = radial_point(sp->center, sp->radius, sg.dirs[j]);
            const Vec4 n = (x.coords() * std::cos(sp->radius) - sp->center.coords()) / sr;
            out.push_back({x, TangentVector(x, sp->orientation * n), sg.weights[j] * sr * sr});
        }
        return;
    }
    const auto& ts = std::get<TorusSurface>(surf);
    const auto m = std::max<std::size_t>(
        4, static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n_target)))));
    const double da = 2.0 * kPi / static_cast<double>(m);
    const double w = std::cos(ts.a) * std::sin(ts.a) * da * da;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            const double t = (static_cast<double>(j) + 0.5) * da;
            const double s = (static_cast<double>(k) + 0.5) * da;
            const Point x = torus_point(ts.a, t, s);
            out.push_back({x, TangentVector(x, ts.orientation * torus_radial_direction(ts.a, t, s)), w});
        }
    }
}

std::vector<double> cumulative(const std::vector<double>& parts) {
    std::vector<double> c(parts.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        acc += parts[i];
        c[i] = acc;
    }
    return c;
}

}  // namespace

Domain::Domain(Shape s) : shape_(std::move(s)) {
    double v = 0.0;
    for (const auto& p : pieces_of(*this)) v += piece_volume(p);
    if (!(v > 0.0)) throw DomainError("domain has zero volume");
    volume_ = v;
}

Domain Domain::full_sphere() { return Domain(FullSphere{}); }

Domain Domain::ball(const Point& center, double radius) {
    if (!(radius > 0.0 && radius <= kPi)) throw DomainError("ball radius must lie in (0, pi]");
    return Domain(Ball{center, radius});
}

Domain Domain::shell(const Point& center, double inner, double outer) {
    if (!(inner > 0.0 && inner < outer && outer < kPi)) {
        throw DomainError("shell radii must satisfy 0 < inner < outer < pi");
    }
    return Domain(Shell{center, inner, outer});
}

Domain Domain::solid_torus(double a) {
    if (!(a > 0.0 && a < 0.5 * kPi)) throw DomainError("solid torus radius must lie in (0, pi/2)");
    return Domain(SolidTorus{a});
}

Domain Domain::complement(const Domain& d) {
    if (const auto* c = std::get_if<Complement>(&d.shape_)) return *c->of;
    if (std::holds_alternative<FullSphere>(d.shape_)) {
        throw DomainError("the complement of the full sphere is empty");
    }
    if (const auto* b = std::get_if<Ball>(&d.shape_); b && b->radius >= kPi) {
        throw DomainError("the complement of a radius-pi ball has zero volume");
    }
    return Domain(Complement{std::make_shared<const Domain>(d)});
}

double Domain::torus_radius(const Point& x) {
    const double t = std::sqrt(x[2] * x[2] + x[3] * x[3]);
    return std::asin(std::min(1.0, t));
}

bool Domain::contains(const Point& x) const {
    return std::visit(
        [&](const auto& s) -> bool {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, FullSphere>) {
                return true;
            } else if constexpr (std::is_same_v<S, Ball>) {
                return geodesic_distance(s.center, x) <= s.radius;
            } else if constexpr (std::is_same_v<S, Shell>) {
                const double a = geodesic_distance(s.center, x);
                return a >= s.inner && a <= s.outer;
            } else if constexpr (std::is_same_v<S, SolidTorus>) {
                return torus_radius(x) <= s.a;
            } else {
                return !s.of->contains(x);
            }
        },
        shape_);
}

bool Domain::has_boundary() const { return !std::holds_alternative<FullSphere>(shape_); }

double Domain::boundary_area() const {
    double a = 0.0;
    for (const auto& s : surfaces_of(*this)) a += surface_area(s);
    return a;
}

double Domain::distance_to_boundary(const Point& x) const {
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, FullSphere>) {
                return std::numeric_limits<double>::infinity();
            } else if constexpr (std::is_same_v<S, Ball>) {
                return std::abs(geodesic_distance(s.center, x) - s.radius);
            } else if constexpr (std::is_same_v<S, Shell>) {
                const double a = geodesic_distance(s.center, x);
                return std::min(std::abs(a - s.inner), std::abs(a - s.outer));
            } else if constexpr (std::is_same_v<S, SolidTorus>) {
                return std::abs(torus_radius(x) - s.a);
            } else {
                return s.of->distance_to_boundary(x);
            }
        },
        shape_);
}

Domain Domain::left_translated(const Point& q) const {
    return std::visit(
        [&](const auto& s) -> Domain {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, FullSphere>) {
                return *this;
            } else if constexpr (std::is_same_v<S, Ball>) {
                return ball(q * s.center, s.radius);
            } else if constexpr (std::is_same_v<S, Shell>) {
                return shell(q * s.center, s.inner, s.outer);
            } else if constexpr (std::is_same_v<S, SolidTorus>) {
                throw DomainError("left translation of a solid torus is not representable");
            } else {
                return complement(s.of->left_translated(q));
            }
        },
        shape_);
}

VolumeNodes Domain::sample_volume(const QuadratureSpec& spec, const Exec& exec) const {
    spec.validate();
    const auto pieces = pieces_of(*this);
    std::vector<double> vols;
    for (const auto& p : pieces) vols.push_back(piece_volume(p));
    VolumeNodes out;
    out.backend = spec.backend;
    if (spec.backend == Backend::monte_carlo) {
        const double w = volume_ / static_cast<double>(spec.n_samples);
        const auto cum = cumulative(vols);
        out.nodes = monte_carlo_nodes<WeightedPoint>(
            spec.n_samples, spec, StreamTag::volume, exec, [&](SubStream& rng) {
                const std::size_t k = pieces.size() == 1 ? 0 : choose(cum, rng.uniform());
                return WeightedPoint{draw_in_piece(pieces[k], rng), w};
            });
        return out;
    }
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const auto n = static_cast<std::size_t>(static_cast<double>(spec.n_samples) * vols[k] / volume_);
        append_grid(pieces[k], n, out.nodes);
        append_grid(pieces[k], n / 8, out.coarse);
    }
    return out;
}

BoundaryNodes Domain::sample_boundary(const QuadratureSpec& spec, const Exec& exec) const {
    spec.validate();
    const auto surfaces = surfaces_of(*this);
    std::vector<double> areas;
    double total = 0.0;
    for (const auto& s : surfaces) {
        areas.push_back(surface_area(s));
        total += areas.back();
    }
    BoundaryNodes out;
    out.backend = spec.backend;
    if (spec.backend == Backend::monte_carlo) {
        const double w = total / static_cast<double>(spec.n_samples);
        const auto cum = cumulative(areas);
        out.nodes = monte_carlo_nodes<BoundarySample>(
            spec.n_samples, spec, StreamTag::boundary, exec, [&](SubStream& rng) {
                const std::size_t k = surfaces.size() == 1 ? 0 : choose(cum, rng.uniform());
                return draw_on_surface(surfaces[k], rng, w);
            });
        return out;
    }
    for (std::size_t k = 0; k < surfaces.size(); ++k) {
        const auto n = static_cast<std::size_t>(static_cast<double>(spec.n_samples) * areas[k] / total);
        append_surface_grid(surfaces[k], n, out.nodes);
        append_surface_grid(surfaces[k], n / 4, out.coarse);
    }
    return out;
}

}  // namespace s3bs
