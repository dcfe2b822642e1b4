#include <cmath>

#include "doctest.h"
#include "s3bs/biot_savart.hpp"
#include "s3bs/errors.hpp"
#include "test_support.hpp"

using namespace s3bs;
using s3bs::test::max_abs;

namespace {

const Point p0 = Point::identity();

QuadratureSpec mc(std::size_t n, double eps = 0.02, std::uint64_t seed = 11) {
    QuadratureSpec s;
    s.n_samples = n;
    s.excision_radius = eps;
    s.seed = seed;
    return s;
}

Point core_point(double t) { return Point::unchecked({std::cos(t), std::sin(t), 0.0, 0.0}); }

}  // namespace

TEST_CASE("method names") {
    CHECK(bs_method_from_string(to_string(BSMethod::left_translation)) == BSMethod::left_translation);
    CHECK(bs_method_from_string("parallel") == BSMethod::parallel_transport);
    CHECK_THROWS_AS(bs_method_from_string("right"), InvalidSpec);
}

TEST_CASE("left-invariant field on the sphere is an eigenfield") {
    const VectorField u = frame_field(1);
    const auto spec = mc(100000);
    auto r = test::rng(41);
    for (BSMethod m : {BSMethod::parallel_transport, BSMethod::left_translation}) {
        const BiotSavart bs(u, Domain::full_sphere(), spec, {m});
        for (int k = 0; k < 3; ++k) {
            const Point y = r.s3_uniform();
            const BSResult res = bs.evaluate(y);
            CHECK(std::abs(dot(res.value.vec, y.coords())) < 1e-12);
            CHECK(norm(res.value.vec + 0.5 * u(y).vec) <= res.error_bound);
            CHECK(res.error_bound >= bs.excision_budget());
        }
    }
}

TEST_CASE("left form exposes its terms and the average") {
    const VectorField u = frame_field(2);
    const Point y(Vec4{0.1, 0.9, -0.3, 0.2});
    const BSResult res = bs_evaluate(u, Domain::full_sphere(), y, BSMethod::left_translation, mc(50000));
    const Vec4 sum = res.kernel_term.value + res.average_term.value + res.gradient_term.value;
    CHECK(max_abs(sum - res.value.vec) < 1e-12);
    // L_* u_2 = y q_2 everywhere: the average is the field at y itself.
    CHECK(max_abs(res.average.value - u(y).vec) < 1e-2);
    CHECK(max_abs(res.average_term.value + 0.5 * res.average.value) < 1e-12);
}

TEST_CASE("gradients on the sphere are in the kernel") {
    const VectorField g = gradient_field(ScalarField::CosDistance{Point(Vec4{0.3, 0.1, 0.9, -0.2}), 0.0});
    auto r = test::rng(42);
    for (BSMethod m : {BSMethod::parallel_transport, BSMethod::left_translation}) {
        const BiotSavart bs(g, Domain::full_sphere(), mc(100000), {m});
        for (int k = 0; k < 3; ++k) {
            const BSResult res = bs.evaluate(r.s3_uniform());
            CHECK(res.value.length() <= res.error_bound);
        }
    }
}

TEST_CASE("solid torus closed form on the core circle") {
    const double a = 0.5;
    const VectorField u = frame_field(1);
    const BiotSavart bs(u, Domain::solid_torus(a), mc(200000));
    for (double t : {0.3, 2.0, 4.4}) {
        const Point y = core_point(t);
        const Vec4 expected = -0.5 * u(y).vec + 0.5 * std::cos(a) * std::cos(a) * longitude_field_W()(y).vec;
        const BSResult res = bs.evaluate(y);
        CHECK(norm(res.value.vec - expected) <= res.error_bound);
        CHECK(norm(res.value.vec - expected) <= 0.03 * norm(expected));
    }
}

TEST_CASE("linearity on shared nodes") {
    const Domain ball = Domain::ball(p0, 1.2);
    const VectorField v = frame_field(3);
    const VectorField w = gradient_field(ScalarField::CosDistance{p0, 0.0});
    const VectorField c = combine({{2.0, v}, {-0.7, w}});
    const auto spec = mc(20000);
    const Point y(Vec4{0.8, 0.1, 0.3, -0.2});
    for (BSMethod m : {BSMethod::parallel_transport, BSMethod::left_translation}) {
        const Vec4 bv = bs_evaluate(v, ball, y, m, spec).value.vec;
        const Vec4 bw = bs_evaluate(w, ball, y, m, spec).value.vec;
        const Vec4 bc = bs_evaluate(c, ball, y, m, spec).value.vec;
        CHECK(max_abs(bc - (2.0 * bv - 0.7 * bw)) < 1e-12);
    }
}

TEST_CASE("equivariance under left multiplication") {
    const Point q(Vec4{0.4, -0.5, 0.6, 0.2});
    const Point c(Vec4{0.9, 0.3, 0.0, 0.1});
    const Domain ball = Domain::ball(c, 1.0);
    const VectorField v = combine({{1.0, frame_field(1)}, {0.5, gradient_field(ScalarField::CosDistance{c, 0.0})}});
    const auto spec = mc(20000);
    auto r = test::rng(43);
    for (BSMethod m : {BSMethod::parallel_transport, BSMethod::left_translation}) {
        for (int k = 0; k < 3; ++k) {
            const Point y = r.s3_uniform();
            const BSResult base = bs_evaluate(v, ball, y, m, spec);
            const BSResult moved = bs_evaluate(pushforward(q, v), ball.left_translated(q), q * y, m, spec);
            // The polar template is carried by the same left multiplication.
            CHECK(max_abs(moved.value.vec - qmul(q.coords(), base.value.vec)) <= 1e-6 * base.error_bound + 1e-10);
        }
    }
}

TEST_CASE("excision sensitivity stays within the bounds") {
    const VectorField u = frame_field(1);
    const Domain torus = Domain::solid_torus(0.5);
    const Point y = core_point(1.0);
    const BSResult a = bs_evaluate(u, torus, y, BSMethod::parallel_transport, mc(100000, 0.02));
    const BSResult b = bs_evaluate(u, torus, y, BSMethod::parallel_transport, mc(100000, 0.04));
    CHECK(norm(a.value.vec - b.value.vec) <= a.error_bound + b.error_bound);
}

TEST_CASE("methods agree") {
    const VectorField g = gradient_field(ScalarField::CosDistance{p0, std::cos(1.0)});
    const Domain ball = Domain::ball(p0, 1.0);
    const auto spec = mc(50000);
    for (const Point& y : {Point(Vec4{1.0, 0.2, 0.1, 0.0}), Point(Vec4{0.0, 1.0, 1.0, 0.5})}) {
        const BSResult p = bs_evaluate(frame_field(2), ball, y, BSMethod::parallel_transport, spec);
        const BSResult l = bs_evaluate(frame_field(2), ball, y, BSMethod::left_translation, spec);
        CHECK(norm(p.value.vec - l.value.vec) <= p.error_bound + l.error_bound);
        const BSResult pg = bs_evaluate(g, ball, y, BSMethod::parallel_transport, spec);
        const BSResult lg = bs_evaluate(g, ball, y, BSMethod::left_translation, spec);
        CHECK(norm(pg.value.vec - lg.value.vec) <= pg.error_bound + lg.error_bound);
    }
}

TEST_CASE("electrostatic fields") {
    const Domain ball = Domain::ball(p0, 1.0);
    const auto spec = mc(50000);
    const Point y(Vec4{0.9, 0.3, -0.2, 0.1});

    // Divergence-free: no volume charge.
    const VectorEstimate rho = electrostatic_field(frame_field(1), ball, y, Charge::rho, spec);
    CHECK(norm(rho.value) == 0.0);
    // Tangent to the boundary: no surface charge.
    const VectorEstimate sig_t = electrostatic_field(frame_field(1), Domain::solid_torus(0.5), y, Charge::sigma, spec);
    CHECK(norm(sig_t.value) < 1e-12);
    // Full sphere: no boundary at all.
    CHECK(norm(electrostatic_field(frame_field(1), Domain::full_sphere(), y, Charge::sigma, spec).value) == 0.0);

    // u_1 crosses a ball boundary: surface charge with zero net total.
    const VectorEstimate sig = electrostatic_field(frame_field(1), ball, y, Charge::sigma, spec);
    CHECK(norm(sig.value) > 10 * sig.error_bound);
    CHECK(std::abs(dot(sig.value, y.coords())) < 1e-12);
    const VectorField u1 = frame_field(1);
    const auto flux = integrate_boundary(ball, [&](const BoundarySample& b) { return dot(u1(b.point).vec, b.normal.vec); },
                                         spec);
    CHECK(std::abs(flux.value) <= 3 * flux.error_bound);

    // The volume charge of a radial gradient pulls the field radially.
    const VectorField g = gradient_field(ScalarField::CosDistance{p0, 0.0});
    const VectorEstimate rg = electrostatic_field(g, ball, y, Charge::rho, spec);
    const Vec4 radial = grad_alpha(y, p0, Slot::x).vec;
    CHECK(norm(rg.value - dot(rg.value, radial) * radial) <= 3 * rg.error_bound + 1e-3 * norm(rg.value));

    // The field of a gradient of potential integrals has no curl.
    CHECK(norm(electrostatic_curl(g, ball, y, Charge::rho, spec).value) < 1e-4);
    CHECK(norm(electrostatic_curl(u1, ball, y, Charge::sigma, spec).value) < 1e-4);
}

TEST_CASE("inner products") {
    const auto spec = mc(20000);
    const double v3 = 2 * kPi * kPi;
    CHECK(inner_product(frame_field(1), frame_field(1), Domain::full_sphere(), spec).value ==
          doctest::Approx(v3).epsilon(1e-12));
    CHECK(std::abs(inner_product(frame_field(1), frame_field(2), Domain::full_sphere(), spec).value) < 1e-12);
    CHECK(inner_product(frame_field(1), frame_field(1), Domain::solid_torus(0.5), spec).value ==
          doctest::Approx(v3 * std::pow(std::sin(0.5), 2)).epsilon(1e-12));
}

TEST_CASE("double integrals") {
    DoubleSpec ds;
    ds.outer = mc(1000, 0.02, 5);
    ds.inner = mc(5000, 0.02, 6);
    const Domain torus = Domain::solid_torus(0.5);
    const AdjointEstimate same = adjoint_pairings(frame_field(1), frame_field(1), torus, ds);
    CHECK(std::abs(same.difference.value) < 1e-12 * std::abs(same.bs_v_w.value));
    CHECK(same.bs_v_w.error_bound > 0.0);

    const ScalarEstimate h = helicity(frame_field(1), Domain::full_sphere(), ds);
    CHECK(std::abs(h.value + kPi * kPi) <= 3 * h.error_bound);
}

TEST_CASE("field scale") {
    const FieldScale s = field_scale(frame_field(1), Domain::solid_torus(0.5));
    CHECK(s.sup_v == doctest::Approx(1.0));
    CHECK(s.sup_div == 0.0);
    const FieldScale g = field_scale(gradient_field(ScalarField::CosDistance{p0, 0.0}), Domain::ball(p0, 1.0));
    CHECK(g.sup_v <= std::sin(1.0) + 1e-12);
    CHECK(g.sup_v > 0.8 * std::sin(1.0));
    CHECK(g.sup_div <= 3.0 + 1e-12);
}
