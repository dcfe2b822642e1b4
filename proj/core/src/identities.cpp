#include "s3bs/identities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "s3bs/errors.hpp"

namespace s3bs {
namespace {

constexpr double kCurlTol = 0.05;
constexpr double kDivTol = 0.01;
constexpr double kKernelTol = 0.03;
// Rounding floor for identities that hold node by node.
constexpr double kRoundoff = 1e-12;

void require_clear(const Domain& omega, const Point& p, double margin) {
    const double d = omega.distance_to_boundary(p);
    if (d < margin) {
        std::ostringstream os;
        os << "probe (" << p[0] << ", " << p[1] << ", " << p[2] << ", " << p[3] << ") is " << d
           << " from the boundary; at least " << margin << " required";
        throw ProbeTooCloseToBoundary(os.str());
    }
}

Vec4 scalar(double v) { return {v, 0.0, 0.0, 0.0}; }

Vec4 left_push(const Vec4& y, const Vec4& x, const Vec4& w) { return qmul(qmul(y, conj(x)), w); }

}  // namespace

void IdentityReport::finalize() {
    if (probes.empty()) {
        pass = max_residual <= tolerance;
        return;
    }
    max_residual = 0.0;
    pass = true;
    for (auto& p : probes) {
        p.pass = p.residual <= p.tolerance;
        max_residual = std::max(max_residual, p.residual);
        pass = pass && p.pass;
    }
}

IdentityReport verify_curl_bs(const VectorField& v, const Domain& omega, const std::vector<Point>& probes,
                              const QuadratureSpec& spec, const CheckOptions& opts) {
    const double margin = 2.0 * (opts.fd.h + spec.excision_radius);
    for (const Point& p : probes) require_clear(omega, p, margin);
    BSOptions bo;
    bo.method = opts.method;
    const BiotSavart bs(v, omega, spec, bo, opts.exec);
    IdentityReport r;
    r.name = "curl_bs";
    r.scale = bs.scale().sup_v;
    const double tol = opts.rel_tol.value_or(kCurlTol) * r.scale;
    for (const Point& y : probes) {
        const VectorEstimate curl = bs.curl(y, opts.fd);
        const VectorEstimate er = electrostatic_field(v, omega, y, Charge::rho, spec, kKernelFD, opts.exec);
        const VectorEstimate es = electrostatic_field(v, omega, y, Charge::sigma, spec, kKernelFD, opts.exec);
        ProbeResult pr;
        pr.probe = y;
        pr.inside = omega.contains(y);
        pr.value = tangent_part(y, curl.value);
        pr.expected = er.value + es.value;
        if (pr.inside) pr.expected += v(y).vec;
        pr.residual = norm(pr.value - pr.expected);
        pr.error_bound = curl.error_bound + er.error_bound + es.error_bound;
        pr.tolerance = tol;
        r.probes.push_back(pr);
    }
    r.finalize();
    return r;
}

IdentityReport verify_div_bs(const VectorField& v, const Domain& omega, const std::vector<Point>& probes,
                             const QuadratureSpec& spec, const CheckOptions& opts) {
    const double margin = 2.0 * (opts.fd.h + spec.excision_radius);
    for (const Point& p : probes) require_clear(omega, p, margin);
    BSOptions bo;
    bo.method = opts.method;
    const BiotSavart bs(v, omega, spec, bo, opts.exec);
    IdentityReport r;
    r.name = "div_bs";
    std::vector<ScalarEstimate> divs;
    for (const Point& y : probes) {
        divs.push_back(bs.divergence(y, opts.kernel_fd));
        r.scale = std::max(r.scale, norm(bs.stencil_mean(y, opts.kernel_fd)));
    }
    const double tol = opts.rel_tol.value_or(kDivTol) * r.scale;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        ProbeResult pr;
        pr.probe = probes[i];
        pr.inside = omega.contains(probes[i]);
        pr.value = scalar(divs[i].value);
        pr.residual = std::abs(divs[i].value);
        pr.error_bound = divs[i].error_bound;
        pr.tolerance = tol;
        r.probes.push_back(pr);
    }
    r.finalize();
    return r;
}

double key_lemma_residual(const Point& x, const Point& y, const TangentVector& v, const FDScheme& fd,
                          Potential kind) {
    fd.validate();
    const double alpha = geodesic_distance(x, y);
    if (!(alpha > 0.1 && alpha < 3.0)) {
        throw DegeneratePair("key lemma needs 0.1 < alpha(x, y) < 3, got " + std::to_string(alpha));
    }
    const Vec4 vx = tangent_part(x, v.vec);
    // P_yx v x grad_y phi as a function of y.
    const auto c_field = [&](const Point& yy) {
        const Vec4 g = eval_potential(kind, geodesic_distance(x, yy), 1) * grad_alpha(x, yy, Slot::y).vec;
        const Vec4 moved = parallel_transport(TangentVector(x, vx), yy).vec;
        return cross_at(yy, moved, g);
    };
    // v . grad_x(phi cos a) as a function of y.
    const auto g_field = [&](const Point& yy) {
        const double a = geodesic_distance(x, yy);
        const double d = eval_potential(kind, a, 1) * std::cos(a) - eval_potential(kind, a) * std::sin(a);
        return d * dot(vx, grad_alpha(x, yy, Slot::x).vec);
    };
    const Vec4 curl = curl_of(c_field, y, fd).vec;
    const Vec4 grad = gradient_of(g_field, y, fd).vec;
    const double lap = laplacian_radial(kind, alpha) - eval_potential(kind, alpha);
    const Vec4 rhs = lap * (vx - dot(vx, y.coords()) * y.coords());
    return norm(curl - grad - rhs);
}

double claim_residual(const Point& x, const Point& y, const TangentVector& v, const FDScheme& fd) {
    fd.validate();
    const Vec4 xc = x.coords();
    const Vec4 vx = tangent_part(x, v.vec);
    const auto f = [&](const Point& yy) { return triple_product(xc, vx, yy.coords()); };
    const Vec4 curl = curl_of(f, y, fd).vec;
    const Vec4 rhs = 2.0 * dot(xc, y.coords()) * vx - 2.0 * dot(vx, y.coords()) * xc;
    return norm(curl - rhs);
}

IdentityReport integral_identity_vxn(const VectorField& v, const Domain& omega, const std::vector<Point>& targets,
                                     const QuadratureSpec& spec, double k_bounds, const Exec& exec) {
    spec.validate();
    const VolumeNodes vol = omega.sample_volume(spec, exec);
    const bool boundary = omega.has_boundary();
    BoundaryNodes bnd;
    if (boundary) bnd = omega.sample_boundary(spec, exec);
    IdentityReport r;
    r.name = "vxn_identity";
    const FieldScale fs = field_scale(v, omega);
    r.scale = fs.sup_v * omega.volume();
    for (const Point& y : targets) {
        const Vec4 yc = y.coords();
        const VectorEstimate lhs = integrate_nodes(
            vol,
            [&](const WeightedPoint& n) {
                const Vec4 x = n.point.coords();
                return left_push(yc, x, v.curl(n.point).vec + 2.0 * v(n.point).vec);
            },
            spec, exec);
        VectorEstimate rhs;
        if (boundary) {
            rhs = integrate_nodes(
                bnd,
                [&](const BoundarySample& b) {
                    const Vec4 x = b.point.coords();
                    return left_push(yc, x, cross_at(b.point, v(b.point).vec, b.normal.vec));
                },
                spec, exec);
        }
        ProbeResult pr;
        pr.probe = y;
        pr.inside = omega.contains(y);
        pr.value = lhs.value;
        pr.expected = -rhs.value;
        pr.residual = norm(lhs.value + rhs.value);
        pr.error_bound = lhs.error_bound + rhs.error_bound;
        pr.tolerance = k_bounds * pr.error_bound + kRoundoff * r.scale;
        r.probes.push_back(pr);
    }
    r.finalize();
    return r;
}

IdentityReport self_adjointness_check(const VectorField& v, const VectorField& w, const Domain& omega,
                                      const DoubleSpec& spec, double k_bounds, const CheckOptions& opts) {
    const AdjointEstimate a = adjoint_pairings(v, w, omega, spec, opts.method, opts.exec);
    IdentityReport r;
    r.name = "self_adjoint";
    r.scale = std::max(std::abs(a.bs_v_w.value), std::abs(a.v_bs_w.value));
    r.max_residual = std::abs(a.difference.value);
    r.error_bound = a.difference.error_bound;
    r.tolerance = k_bounds * r.error_bound + kRoundoff * r.scale;
    r.metrics = {{"bs_v_w", a.bs_v_w.value},
                 {"bs_v_w_error", a.bs_v_w.error_bound},
                 {"v_bs_w", a.v_bs_w.value},
                 {"v_bs_w_error", a.v_bs_w.error_bound},
                 {"difference", a.difference.value},
                 {"difference_error", a.difference.error_bound}};
    r.finalize();
    return r;
}

IdentityReport kernel_check(const ScalarField& f, const Domain& omega, const std::vector<Point>& probes,
                            const QuadratureSpec& spec, const CheckOptions& opts) {
    const VectorField grad = gradient_field(f);
    HodgeClass cls;
    try {
        cls = classify_hodge(grad, omega);
    } catch (const UnknownClass& e) {
        throw WrongClass(std::string("kernel check needs a harmonic or grounded gradient: ") + e.what());
    }
    if (!in_bs_kernel(cls)) {
        throw WrongClass("kernel check needs a harmonic or grounded gradient, got " + to_string(cls));
    }
    BSOptions bo;
    bo.method = opts.method;
    const BiotSavart bs(grad, omega, spec, bo, opts.exec);
    IdentityReport r;
    r.name = "kernel";
    r.scale = bs.scale().sup_v;
    r.note = "class " + to_string(cls);
    const double tol = opts.rel_tol.value_or(kKernelTol) * r.scale;
    for (const Point& y : probes) {
        const BSResult b = bs.evaluate(y);
        ProbeResult pr;
        pr.probe = y;
        pr.inside = omega.contains(y);
        pr.value = b.value.vec;
        pr.residual = b.value.length();
        pr.error_bound = b.error_bound;
        pr.tolerance = tol;
        r.probes.push_back(pr);
    }
    r.finalize();
    return r;
}

IdentityReport energy_inequality_check(const VectorField& v, const Domain& omega, const DoubleSpec& spec,
                                       double k_bounds, const Exec& exec) {
    const FieldScale fs = field_scale(v, omega);
    if (fs.sup_div > 1e-10) {
        throw WrongClass("energy inequality needs a divergence-free field; sup|div V| = " +
                         std::to_string(fs.sup_div));
    }
    const EnergyEstimate e = electrostatic_energy(v, omega, spec, exec);
    IdentityReport r;
    r.name = "energy_inequality";
    r.scale = e.current_energy.value;
    const double margin = e.current_energy.value - e.surface_energy.value;
    r.error_bound = e.current_energy.error_bound + e.surface_energy.error_bound;
    // The residual is the amount by which the inequality is violated.
    r.max_residual = std::max(0.0, -margin);
    r.tolerance = k_bounds * r.error_bound;
    r.metrics = {{"surface_energy", e.surface_energy.value},
                 {"surface_energy_error", e.surface_energy.error_bound},
                 {"current_energy", e.current_energy.value},
                 {"current_energy_error", e.current_energy.error_bound},
                 {"margin", margin},
                 {"strict_gap", margin > r.tolerance ? 1.0 : 0.0}};
    r.finalize();
    return r;
}

IdentityReport method_agreement(const VectorField& v, const Domain& omega, const std::vector<Point>& probes,
                                const QuadratureSpec& spec, const Exec& exec) {
    BSOptions po;
    po.method = BSMethod::parallel_transport;
    BSOptions lo;
    lo.method = BSMethod::left_translation;
    const BiotSavart par(v, omega, spec, po, exec);
    const BiotSavart left(v, omega, spec, lo, exec);
    IdentityReport r;
    r.name = "method_agreement";
    r.scale = par.scale().sup_v;
    for (const Point& y : probes) {
        const BSResult a = par.evaluate(y);
        const BSResult b = left.evaluate(y);
        ProbeResult pr;
        pr.probe = y;
        pr.inside = omega.contains(y);
        pr.value = a.value.vec;
        pr.expected = b.value.vec;
        pr.residual = norm(a.value.vec - b.value.vec);
        pr.error_bound = a.error_bound + b.error_bound;
        pr.tolerance = pr.error_bound;
        r.probes.push_back(pr);
    }
    r.finalize();
    return r;
}

std::vector<IdentityReport> maxwell_suite(const VectorField& v, const Domain& omega, const std::vector<Point>& probes,
                                          const QuadratureSpec& spec, const CheckOptions& opts) {
    const double margin = 2.0 * (opts.fd.h + spec.excision_radius);
    for (const Point& p : probes) require_clear(omega, p, margin);
    const FieldScale fs = field_scale(v, omega);
    const double tol = opts.rel_tol.value_or(kCurlTol) * fs.sup_v;

    IdentityReport gauss;
    gauss.name = "maxwell_div_e";
    gauss.scale = fs.sup_v;
    IdentityReport faraday;
    faraday.name = "maxwell_curl_e";
    faraday.scale = fs.sup_v;
    for (const Point& y : probes) {
        ProbeResult g;
        g.probe = y;
        g.inside = omega.contains(y);
        double div_e = 0.0;
        Vec4 curl_e;
        for (Charge c : {Charge::rho, Charge::sigma}) {
            const ScalarEstimate d = electrostatic_divergence(v, omega, y, c, spec, opts.fd, opts.exec);
            div_e += d.value;
            g.error_bound += d.error_bound;
            const VectorEstimate k = electrostatic_curl(v, omega, y, c, spec, kKernelFD, opts.exec);
            curl_e += k.value;
        }
        ProbeResult f = g;
        // With charge density -t div V inside the domain, div dE/dt = -div V there.
        g.value = scalar(div_e);
        g.expected = scalar(g.inside ? -v.divergence(y) : 0.0);
        g.residual = std::abs(div_e - g.expected[0]);
        g.tolerance = tol;
        gauss.probes.push_back(g);

        f.value = tangent_part(y, curl_e);
        f.residual = norm(f.value);
        f.error_bound = 0.0;
        f.tolerance = tol;
        faraday.probes.push_back(f);
    }
    gauss.finalize();
    faraday.finalize();

    IdentityReport div_b = verify_div_bs(v, omega, probes, spec, opts);
    div_b.name = "maxwell_div_b";
    IdentityReport ampere = verify_curl_bs(v, omega, probes, spec, opts);
    ampere.name = "maxwell_curl_b";
    return {gauss, faraday, div_b, ampere};
}

}  // namespace s3bs
