#include "s3bs/biot_savart.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "s3bs/errors.hpp"
#include "s3bs/potentials.hpp"

namespace s3bs {
namespace {

constexpr double kInv4Pi2 = 1.0 / (4.0 * kPi * kPi);

bool is_full_sphere(const Domain& d) { return std::holds_alternative<Domain::FullSphere>(d.shape()); }

std::vector<FrameStencil> stencils_around(const FrameStencil& outer, const FDScheme& fd) {
    std::vector<FrameStencil> out;
    out.reserve(outer.size());
    for (const Point& p : outer.points()) out.emplace_back(p, fd);
    return out;
}

Vec4 to_vec(const std::vector<double>& v, std::size_t first) { return {v[first], v[first + 1], v[first + 2], v[first + 3]}; }

VectorEstimate vector_part(const Accumulation& a, std::size_t first) {
    VectorEstimate e;
    e.value = to_vec(a.value, first);
    e.error_bound = a.error_norm(first, 4);
    e.n_used = a.n_used;
    return e;
}

}  // namespace

std::string to_string(BSMethod m) {
    return m == BSMethod::parallel_transport ? "parallel_transport" : "left_translation";
}

BSMethod bs_method_from_string(const std::string& name) {
    if (name == "parallel_transport" || name == "parallel") return BSMethod::parallel_transport;
    if (name == "left_translation" || name == "left") return BSMethod::left_translation;
    throw InvalidSpec("unknown Biot-Savart method '" + name + "'");
}

FieldScale field_scale(const VectorField& v, const Domain& omega) {
    QuadratureSpec spec;
    spec.n_samples = 4096;
    spec.seed = 0x7363616c65;
    const Exec serial{1};
    FieldScale s;
    const auto update = [&](const Point& x) {
        s.sup_v = std::max(s.sup_v, v(x).length());
        s.sup_div = std::max(s.sup_div, std::abs(v.divergence(x)));
    };
    for (const auto& n : omega.sample_volume(spec, serial).nodes) update(n.point);
    if (omega.has_boundary()) {
        spec.n_samples = 1024;
        for (const auto& n : omega.sample_boundary(spec, serial).nodes) update(n.point);
    }
    return s;
}

BiotSavart::BiotSavart(VectorField v, Domain omega, const QuadratureSpec& spec, BSOptions options,
                       const Exec& exec)
    : v_(std::move(v)), omega_(std::move(omega)), spec_(spec), options_(options), exec_(exec) {
    spec_.validate();
    options_.outer_fd.validate();
    validate_orientation();
    nodes_ = polar_template(spec_, exec_);
    scale_ = field_scale(v_, omega_);
    full_sphere_ = is_full_sphere(omega_);
}

bool BiotSavart::inside(const Vec4& x) const {
    return full_sphere_ || omega_.contains(Point::unchecked(x));
}

BiotSavart::Parts BiotSavart::parts_at(const Vec4& y, const Vec4& x, const Vec4& vx) const {
    Parts p{};
    const double c = std::clamp(dot(x, y), -1.0, 1.0);
    // Nodes inside the antipodal cutoff carry weight sin^2 a < 1e-8 and are dropped.
    if (1.0 + c < kPairEpsilon) return p;
    const double a = std::acos(c);
    const Vec4 ga = (y * c - x) / std::sin(a);
    if (options_.method == BSMethod::parallel_transport) {
        const Vec4 moved = vx - (dot(vx, y) / (1.0 + c)) * (x + y);
        p.kernel = triple_product(y, moved, eval_potential(Potential::phi, a, 1) * ga);
        return p;
    }
    const Vec4 lv = qmul(qmul(y, conj(x)), vx);
    p.kernel = triple_product(y, lv, eval_potential(Potential::phi0, a, 1) * ga);
    p.average = lv;
    // Outer gradient of the phi1 term, differenced in y with x held fixed
    // (common random numbers, no boundary crossings).
    const FrameStencil st(Point::unchecked(y), options_.outer_fd);
    double g[12];
    for (std::size_t k = 0; k < st.size(); ++k) {
        const Vec4& yk = st.points()[k].coords();
        const double ck = std::clamp(dot(x, yk), -1.0, 1.0);
        const double ak = std::acos(ck);
        const Vec4 lvk = qmul(qmul(yk, conj(x)), vx);
        g[k] = eval_potential(Potential::phi1, ak, 1) * dot(lvk, (yk * ck - x) / std::sin(ak));
    }
    p.gradient = 2.0 * st.gradient(g);
    return p;
}

Vec4 BiotSavart::total(const Parts& p) const {
    if (options_.method == BSMethod::parallel_transport) return p.kernel;
    return p.kernel - kInv4Pi2 * p.average + p.gradient;
}

BiotSavart::Parts BiotSavart::parts(const Vec4& y, const PolarNode& n) const {
    const Vec4 x = qmul(y, n.z());
    if (!inside(x)) return {};
    return parts_at(y, x, v_(Point::unchecked(x)).vec);
}

Vec4 BiotSavart::integrand(const Vec4& y, const PolarNode& n) const { return total(parts(y, n)); }

BSResult BiotSavart::evaluate(const Point& y) const {
    const Vec4 yc = y.coords();
    BSResult r;
    r.method = options_.method;
    if (options_.method == BSMethod::parallel_transport) {
        const NodeKernel<PolarNode> k = [&](const PolarNode& n, double* out) {
            detail::store(parts(yc, n).kernel, out);
        };
        const Accumulation a = accumulate(nodes_, 4, k, spec_.batch_size, exec_);
        r.kernel_term = vector_part(a, 0);
        r.value = TangentVector(y, r.kernel_term.value);
        r.error_bound = r.kernel_term.error_bound + excision_budget();
        r.n_used = a.n_used;
        return r;
    }
    // Components: kernel, average term, gradient term, total, [V].
    const NodeKernel<PolarNode> k = [&](const PolarNode& n, double* out) {
        const Parts p = parts(yc, n);
        detail::store(p.kernel, out);
        detail::store(-kInv4Pi2 * p.average, out + 4);
        detail::store(p.gradient, out + 8);
        detail::store(total(p), out + 12);
    };
    const Accumulation a = accumulate(nodes_, 16, k, spec_.batch_size, exec_);
    r.kernel_term = vector_part(a, 0);
    r.average_term = vector_part(a, 4);
    r.gradient_term = vector_part(a, 8);
    const VectorEstimate total = vector_part(a, 12);
    r.average = r.average_term;
    r.average.value = r.average_term.value * -2.0;
    r.average.error_bound = 2.0 * r.average_term.error_bound;
    r.value = TangentVector(y, total.value);
    r.error_bound = total.error_bound + excision_budget();
    r.n_used = a.n_used;
    return r;
}

VectorEstimate BiotSavart::curl(const Point& y, const FDScheme& fd) const {
    const FrameStencil st(y, fd);
    const NodeKernel<PolarNode> k = [&](const PolarNode& n, double* out) {
        Vec4 vals[12];
        for (std::size_t i = 0; i < st.size(); ++i) vals[i] = integrand(st.points()[i].coords(), n);
        detail::store(st.curl(vals), out);
    };
    VectorEstimate e = detail::unpack<Vec4>(accumulate(nodes_, 4, k, spec_.batch_size, exec_));
    e.error_bound += excision_budget() + fd.h * fd.h * scale_.sup_v;
    return e;
}

ScalarEstimate BiotSavart::divergence(const Point& y, const FDScheme& fd) const {
    const FrameStencil st(y, fd);
    const Vec4 yc = y.coords();
    const NodeKernel<PolarNode> k = [&](const PolarNode& n, double* out) {
        const Vec4 x = qmul(yc, n.z());
        if (!inside(x)) return;
        const Vec4 vx = v_(Point::unchecked(x)).vec;
        Vec4 vals[12];
        for (std::size_t i = 0; i < st.size(); ++i) vals[i] = total(parts_at(st.points()[i].coords(), x, vx));
        out[0] = st.divergence(vals);
    };
    ScalarEstimate e = detail::unpack<double>(accumulate(nodes_, 1, k, spec_.batch_size, exec_));
    e.error_bound += excision_budget() + fd.h * fd.h * scale_.sup_v;
    return e;
}

Vec4 BiotSavart::stencil_mean(const Point& y, const FDScheme& fd) const {
    const FrameStencil st(y, fd);
    const double inv = 1.0 / static_cast<double>(st.size());
    const NodeKernel<PolarNode> k = [&](const PolarNode& n, double* out) {
        Vec4 acc;
        for (const Point& p : st.points()) acc += integrand(p.coords(), n);
        detail::store(acc * inv, out);
    };
    return detail::unpack<Vec4>(accumulate(nodes_, 4, k, spec_.batch_size, exec_)).value;
}

BSResult bs_evaluate(const VectorField& v, const Domain& omega, const Point& y, BSMethod method,
                     const QuadratureSpec& spec, const Exec& exec) {
    BSOptions opts;
    opts.method = method;
    return BiotSavart(v, omega, spec, opts, exec).evaluate(y);
}

namespace {

// Per-node values of a charge potential at every point of a stencil, reduced
// by `combine` into `width` components. Volume potentials are integrated on
// the polar template around `center`; with `moving` the template follows each
// stencil point (keeping the point-source term in second differences),
// otherwise the nodes stay fixed.
template <class Combine>
Accumulation charge_accumulate(const VectorField& v, const Domain& omega, const Point& center,
                               const std::vector<Point>& pts, Charge which, bool moving, const QuadratureSpec& spec,
                               const Exec& exec, std::size_t width, Combine&& combine) {
    if (which == Charge::rho) {
        const PolarNodes nodes = polar_template(spec, exec);
        const bool full = is_full_sphere(omega);
        const NodeKernel<PolarNode> k = [&](const PolarNode& n, double* out) {
            std::vector<double> vals(pts.size(), 0.0);
            if (moving) {
                const double p0 = eval_potential(Potential::phi0, n.alpha);
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    const Point x = Point::unchecked(qmul(pts[i].coords(), n.z()));
                    vals[i] = (full || omega.contains(x)) ? p0 * v.divergence(x) : 0.0;
                }
            } else {
                const Point x = Point::unchecked(qmul(center.coords(), n.z()));
                if (full || omega.contains(x)) {
                    const double rho = v.divergence(x);
                    for (std::size_t i = 0; i < pts.size(); ++i) {
                        vals[i] = eval_potential(Potential::phi0, geodesic_distance(x, pts[i])) * rho;
                    }
                }
            }
            combine(vals.data(), out);
        };
        return accumulate(nodes, width, k, spec.batch_size, exec);
    }
    const BoundaryNodes nodes = omega.sample_boundary(spec, exec);
    const NodeKernel<BoundarySample> k = [&](const BoundarySample& b, double* out) {
        std::vector<double> vals(pts.size());
        const double sigma = dot(v(b.point).vec, b.normal.vec);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            vals[i] = eval_potential(Potential::phi0, geodesic_distance(b.point, pts[i])) * sigma;
        }
        combine(vals.data(), out);
    };
    return accumulate(nodes, width, k, spec.batch_size, exec);
}

// dE/dt = sign * grad(potential) with sign -1 for rho, +1 for sigma.
double charge_sign(Charge which) { return which == Charge::rho ? -1.0 : 1.0; }

double charge_budget(const VectorField& v, const Domain& omega, Charge which, const QuadratureSpec& spec) {
    return which == Charge::rho ? spec.excision_radius * field_scale(v, omega).sup_div : 0.0;
}

}  // namespace

VectorEstimate electrostatic_field(const VectorField& v, const Domain& omega, const Point& y, Charge which,
                                   const QuadratureSpec& spec, const FDScheme& fd, const Exec& exec) {
    if (which == Charge::sigma && !omega.has_boundary()) {
        VectorEstimate zero;
        return zero;
    }
    const FrameStencil st(y, fd);
    const double sign = charge_sign(which);
    const Accumulation a = charge_accumulate(v, omega, y, st.points(), which, false, spec, exec, 4,
                                             [&](const double* g, double* out) {
                                                 detail::store(sign * st.gradient(g), out);
                                             });
    VectorEstimate e = detail::unpack<Vec4>(a);
    e.value = tangent_part(y, e.value);
    e.error_bound += charge_budget(v, omega, which, spec);
    return e;
}

ScalarEstimate electrostatic_divergence(const VectorField& v, const Domain& omega, const Point& y,
                                        Charge which, const QuadratureSpec& spec, const FDScheme& fd,
                                        const Exec& exec) {
    if (which == Charge::sigma && !omega.has_boundary()) return {};
    const FrameStencil st(y, fd, true);
    const double sign = charge_sign(which);
    const Accumulation a = charge_accumulate(v, omega, y, st.points(), which, true, spec, exec, 1,
                                             [&](const double* g, double* out) { out[0] = sign * st.laplacian(g); });
    ScalarEstimate e = detail::unpack<double>(a);
    e.error_bound += charge_budget(v, omega, which, spec);
    return e;
}

VectorEstimate electrostatic_curl(const VectorField& v, const Domain& omega, const Point& y, Charge which,
                                  const QuadratureSpec& spec, const FDScheme& fd, const Exec& exec) {
    if (which == Charge::sigma && !omega.has_boundary()) return {};
    const FrameStencil outer(y, fd);
    const std::vector<FrameStencil> inner = stencils_around(outer, fd);
    std::vector<Point> pts;
    for (const auto& s : inner) pts.insert(pts.end(), s.points().begin(), s.points().end());
    const double sign = charge_sign(which);
    const std::size_t per = inner.front().size();
    const Accumulation a = charge_accumulate(v, omega, y, pts, which, false, spec, exec, 4, [&](const double* g, double* out) {
        Vec4 field[12];
        for (std::size_t i = 0; i < inner.size(); ++i) field[i] = sign * inner[i].gradient(g + i * per);
        detail::store(outer.curl(field), out);
    });
    VectorEstimate e = detail::unpack<Vec4>(a);
    e.error_bound += charge_budget(v, omega, which, spec);
    return e;
}

ScalarEstimate inner_product(const VectorField& v, const VectorField& w, const Domain& omega,
                             const QuadratureSpec& spec, const Exec& exec) {
    return integrate_volume(
        omega, [&](const Point& x) { return dot(v(x).vec, w(x).vec); }, spec, std::nullopt, exec);
}

namespace {

// sum_o w_o sum_z w_z h(o, z) for M integrands at once. `prepare(x_o)`
// returns the inner integrand (PolarNode -> std::array<double, M>) for one
// outer node. Per integrand the components are: the total, then one entry per
// inner slice scaled to a full estimate (Monte Carlo templates) or the
// coarse-template total (grids).
template <std::size_t M, class Node, class Prepare>
std::array<ScalarEstimate, M> double_integral(const NodeSet<Node>& outer, const DoubleSpec& ds, const Exec& exec,
                                              Prepare&& prepare) {
    const PolarNodes inner = polar_template(ds.inner, exec);
    const bool mc_inner = inner.backend == Backend::monte_carlo;
    const std::size_t groups = mc_inner ? std::max<std::size_t>(2, ds.inner_groups) : 1;
    const std::size_t n = inner.nodes.size();
    const std::size_t slice = mc_inner ? (n + groups - 1) / groups : n;
    const std::size_t stride = 1 + groups;

    const NodeKernel<Node> k = [&](const Node& o, double* out) {
        const auto h = prepare(o);
        std::array<double, M> total{};
        if (mc_inner) {
            for (std::size_t g = 0; g < groups; ++g) {
                std::array<double, M> s{};
                const std::size_t end = std::min(n, (g + 1) * slice);
                for (std::size_t i = g * slice; i < end; ++i) {
                    const auto v = h(inner.nodes[i]);
                    for (std::size_t m = 0; m < M; ++m) s[m] += inner.nodes[i].weight * v[m];
                }
                const double scale = static_cast<double>(n) / static_cast<double>(end - g * slice);
                for (std::size_t m = 0; m < M; ++m) {
                    total[m] += s[m];
                    out[m * stride + 1 + g] = s[m] * scale;
                }
            }
        } else {
            std::array<double, M> c{};
            for (const auto& z : inner.nodes) {
                const auto v = h(z);
                for (std::size_t m = 0; m < M; ++m) total[m] += z.weight * v[m];
            }
            for (const auto& z : inner.coarse) {
                const auto v = h(z);
                for (std::size_t m = 0; m < M; ++m) c[m] += z.weight * v[m];
            }
            for (std::size_t m = 0; m < M; ++m) out[m * stride + 1] = c[m];
        }
        for (std::size_t m = 0; m < M; ++m) out[m * stride] = total[m];
    };
    const Accumulation a = accumulate(outer, M * stride, k, ds.outer.batch_size, exec);

    std::array<ScalarEstimate, M> res;
    for (std::size_t m = 0; m < M; ++m) {
        const double* v = a.value.data() + m * stride;
        double inner_err = 0.0;
        if (mc_inner) {
            double mean = 0.0;
            for (std::size_t g = 0; g < groups; ++g) mean += v[1 + g];
            mean /= static_cast<double>(groups);
            double var = 0.0;
            for (std::size_t g = 0; g < groups; ++g) var += (v[1 + g] - mean) * (v[1 + g] - mean);
            var /= static_cast<double>(groups - 1);
            inner_err = std::sqrt(var / static_cast<double>(groups));
        } else {
            inner_err = std::abs(v[1] - v[0]);
        }
        res[m].value = v[0];
        res[m].error_bound = std::hypot(a.error[m * stride], inner_err);
        res[m].n_used = outer.nodes.size() * n;
    }
    return res;
}

}  // namespace

ScalarEstimate helicity(const VectorField& v, const Domain& omega, const DoubleSpec& spec, BSMethod method,
                        const Exec& exec) {
    BSOptions opts;
    opts.method = method;
    const BiotSavart bs(v, omega, spec.inner, opts, exec);
    const VolumeNodes outer = omega.sample_volume(spec.outer, exec);
    ScalarEstimate e = double_integral<1>(outer, spec, exec, [&](const WeightedPoint& o) {
        const Point& xo = o.point;
        const Vec4 y = xo.coords();
        const Vec4 vy = v(xo).vec;
        return [&bs, y, vy](const PolarNode& z) { return std::array<double, 1>{dot(vy, bs.integrand(y, z))}; };
    })[0];
    // Truncation of the inner integral, paired with |V| over the domain.
    e.error_bound += bs.excision_budget() * bs.scale().sup_v * omega.volume();
    return e;
}

AdjointEstimate adjoint_pairings(const VectorField& v, const VectorField& w, const Domain& omega,
                                 const DoubleSpec& spec, BSMethod method, const Exec& exec) {
    BSOptions opts;
    opts.method = method;
    // One evaluator serves both fields: the kernel is linear in the field value.
    const BiotSavart bv(v, omega, spec.inner, opts, exec);
    const FieldScale ws = field_scale(w, omega);
    const bool full = is_full_sphere(omega);
    const VolumeNodes outer = omega.sample_volume(spec.outer, exec);
    const auto est = double_integral<3>(outer, spec, exec, [&](const WeightedPoint& o) {
        const Vec4 y = o.point.coords();
        const Vec4 vy = v(o.point).vec;
        const Vec4 wy = w(o.point).vec;
        return [&, y, vy, wy](const PolarNode& z) {
            const Vec4 x = qmul(y, z.z());
            const Point xp = Point::unchecked(x);
            if (!full && !omega.contains(xp)) return std::array<double, 3>{0.0, 0.0, 0.0};
            const double a = dot(bv.kernel_at(y, x, v(xp).vec), wy);
            const double b = dot(vy, bv.kernel_at(y, x, w(xp).vec));
            return std::array<double, 3>{a - b, a, b};
        };
    });
    AdjointEstimate out;
    // The truncated kernel is itself symmetric, so the difference carries no
    // excision budget; the individual pairings do.
    out.difference = est[0];
    const double budget = bv.excision_budget() * ws.sup_v * omega.volume();
    out.bs_v_w = est[1];
    out.bs_v_w.error_bound += budget;
    out.v_bs_w = est[2];
    out.v_bs_w.error_bound += budget;
    return out;
}

EnergyEstimate electrostatic_energy(const VectorField& v, const Domain& omega, const DoubleSpec& spec,
                                   const Exec& exec) {
    EnergyEstimate out;
    out.current_energy = integrate_volume(
        omega, [&](const Point& x) { return dot(v(x).vec, v(x).vec); }, spec.outer, std::nullopt, exec);
    if (!omega.has_boundary()) return out;
    const BoundaryNodes outer = omega.sample_boundary(spec.outer, exec);
    const bool full = is_full_sphere(omega);
    // u(x') = oint phi0 sigma = int_Omega grad_x phi0 . V dx for divergence-free V;
    // the kernel is O(1/alpha^2) at x', so the polar template around x' applies.
    auto est = double_integral<1>(outer, spec, exec, [&](const BoundarySample& b) {
        const Vec4 xp = b.point.coords();
        const double sigma = dot(v(b.point).vec, b.normal.vec);
        return [&, xp, sigma](const PolarNode& z) {
            if (sigma == 0.0) return std::array<double, 1>{0.0};
            const Vec4 x = qmul(xp, z.z());
            if (!full && !omega.contains(Point::unchecked(x))) return std::array<double, 1>{0.0};
            const Vec4 grad = (x * z.cos_a - xp) / z.sin_a;
            const double d = eval_potential(Potential::phi0, z.alpha, 1) * dot(grad, v(Point::unchecked(x)).vec);
            return std::array<double, 1>{-sigma * d};
        };
    })[0];
    const FieldScale fs = field_scale(v, omega);
    est.error_bound += spec.inner.excision_radius * fs.sup_v * fs.sup_v * omega.boundary_area();
    out.surface_energy = est;
    return out;
}

}  // namespace s3bs
