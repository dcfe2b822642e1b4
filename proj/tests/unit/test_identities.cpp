#include <cmath>

#include "doctest.h"
#include "s3bs/errors.hpp"
#include "s3bs/identities.hpp"
#include "test_support.hpp"

using namespace s3bs;
using s3bs::test::max_abs;

namespace {

const Point p0 = Point::identity();

QuadratureSpec mc(std::size_t n, std::uint64_t seed = 21) {
    QuadratureSpec s;
    s.n_samples = n;
    s.seed = seed;
    return s;
}

// Draws x, y at distance in [0.2, 2.9] and a tangent vector at x.
struct Config {
    Point x, y;
    TangentVector v;
};
Config draw(SubStream& r) {
    for (;;) {
        const Point x = r.s3_uniform(), y = r.s3_uniform();
        const double a = geodesic_distance(x, y);
        if (a >= 0.2 && a <= 2.9) return {x, y, test::random_tangent(r, x)};
    }
}

}  // namespace

TEST_CASE("report finalization") {
    IdentityReport r;
    r.max_residual = 0.5;
    r.tolerance = 1.0;
    r.finalize();
    CHECK(r.pass);
    r.probes.resize(2);
    r.probes[0].residual = 0.1;
    r.probes[0].tolerance = 0.2;
    r.probes[1].residual = 0.3;
    r.probes[1].tolerance = 0.2;
    r.finalize();
    CHECK(r.probes[0].pass);
    CHECK_FALSE(r.probes[1].pass);
    CHECK_FALSE(r.pass);
    CHECK(r.max_residual == 0.3);
}

TEST_CASE("key lemma for all three potentials") {
    auto r = test::rng(51);
    for (int k = 0; k < 20; ++k) {
        const Config c = draw(r);
        CHECK(key_lemma_residual(c.x, c.y, c.v) <= 1e-5);
        CHECK(key_lemma_residual(c.x, c.y, c.v, {1e-3, true}, Potential::phi0) <= 1e-5);
        CHECK(key_lemma_residual(c.x, c.y, c.v, {1e-3, true}, Potential::phi1) <= 1e-5);
        // Along the geodesic.
        const TangentVector along(c.x, 1.3 * grad_alpha(c.x, c.y, Slot::x).vec);
        CHECK(key_lemma_residual(c.x, c.y, along) <= 1e-5);
    }
    const Point near(Vec4{1.0, 0.05, 0.0, 0.0});
    CHECK_THROWS_AS(key_lemma_residual(p0, near, TangentVector(p0, Vec4::basis(2))), DegeneratePair);
    CHECK_THROWS_AS(key_lemma_residual(p0, p0.antipode(), TangentVector(p0, Vec4::basis(2))), DegeneratePair);
}

TEST_CASE("curl of the triple product with a fixed point") {
    auto r = test::rng(52);
    for (int k = 0; k < 20; ++k) {
        const Config c = draw(r);
        CHECK(claim_residual(c.x, c.y, c.v) <= 1e-5);
    }
}

TEST_CASE("the curl formula needs x, not y, in its last term") {
    // curl_y [x, v, y] = 2 (x.y) v - 2 (v.y) x; replacing x by y in the last term fails.
    auto r = test::rng(53);
    const Config c = draw(r);
    auto field = [&](const Point& y) { return TangentVector(y, triple_product(c.x.coords(), c.v.vec, y.coords())); };
    const Vec4 curl = curl_of(field, c.y, {1e-3, true}).vec;
    const double xy = dot(c.x.coords(), c.y.coords());
    const double vy = dot(c.v.vec, c.y.coords());
    const Vec4 with_x = tangent_part(c.y, 2 * xy * c.v.vec - 2 * vy * c.x.coords());
    const Vec4 with_y = tangent_part(c.y, 2 * xy * c.v.vec - 2 * vy * c.y.coords());
    CHECK(norm(curl - with_x) < 1e-6);
    CHECK(norm(curl - with_y) > 1e-3);
}

TEST_CASE("curl and divergence of BS for an eigenfield") {
    const VectorField u = frame_field(1);
    const std::vector<Point> probes = {Point(Vec4{0.2, 0.9, 0.1, -0.3}), Point(Vec4{-0.5, 0.1, 0.7, 0.4})};
    const IdentityReport curl = verify_curl_bs(u, Domain::full_sphere(), probes, mc(50000));
    CHECK(curl.pass);
    CHECK(curl.probes.size() == 2);
    CHECK(curl.probes[0].inside);
    const IdentityReport div = verify_div_bs(u, Domain::full_sphere(), probes, mc(50000));
    CHECK(div.pass);
    CHECK(div.scale == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("probes too close to the boundary are refused") {
    const Domain ball = Domain::ball(p0, 1.0);
    const Point edge(Vec4{std::cos(1.01), std::sin(1.01), 0.0, 0.0});
    CHECK_THROWS_AS(verify_curl_bs(frame_field(1), ball, {edge}, mc(1000)), ProbeTooCloseToBoundary);
}

TEST_CASE("integral identity") {
    const std::vector<Point> targets = {p0, Point(Vec4{0.3, 0.3, 0.9, 0.1})};
    // Curl eigenfield on the full sphere: the volume side cancels node by node.
    const IdentityReport s = integral_identity_vxn(frame_field(1), Domain::full_sphere(), targets, mc(10000));
    CHECK(s.pass);
    CHECK(s.max_residual < 1e-10);
    // Curl-free field with flux through the boundary.
    const VectorField g = gradient_field(ScalarField::CosDistance{p0, 0.0});
    const IdentityReport b = integral_identity_vxn(g, Domain::ball(p0, 1.0), targets, mc(40000));
    CHECK(b.pass);
}

TEST_CASE("kernel check preconditions") {
    const Domain ball = Domain::ball(p0, 1.0);
    const std::vector<Point> probes = {Point(Vec4{1.0, 0.3, 0.0, 0.0})};
    CHECK_THROWS_AS(kernel_check(ScalarField::CosDistance{p0, 0.0}, ball, probes, mc(1000)), WrongClass);
    CHECK_THROWS_AS(kernel_check(ScalarField::CotDistance{p0, 1.0}, ball, probes, mc(1000)), WrongClass);
    const IdentityReport zero = kernel_check(ScalarField::Constant{3.0}, ball, probes, mc(1000));
    CHECK(zero.pass);
    CHECK(zero.max_residual == 0.0);
}

TEST_CASE("energy inequality") {
    DoubleSpec ds;
    ds.outer = mc(1000, 3);
    ds.inner = mc(2000, 4);
    CHECK_THROWS_AS(energy_inequality_check(gradient_field(ScalarField::CosDistance{p0, 0.0}), Domain::ball(p0, 1.0), ds),
                    WrongClass);
    // Tangent to the boundary: no surface charge at all.
    const IdentityReport t = energy_inequality_check(frame_field(1), Domain::solid_torus(0.5), ds);
    CHECK(t.pass);
    bool found = false;
    for (const auto& [k, v] : t.metrics) {
        if (k == "surface_energy") {
            found = true;
            CHECK(std::abs(v) < 1e-12);
        }
    }
    CHECK(found);
}

TEST_CASE("self-adjointness with identical fields") {
    DoubleSpec ds;
    ds.outer = mc(1000, 7);
    ds.inner = mc(2000, 8);
    const IdentityReport r = self_adjointness_check(frame_field(2), frame_field(2), Domain::solid_torus(0.5), ds);
    CHECK(r.pass);
    CHECK(r.max_residual < 1e-10);
}

TEST_CASE("method agreement report") {
    const IdentityReport r = method_agreement(frame_field(1), Domain::solid_torus(0.5),
                                              {Point(Vec4{1.0, 0.2, 0.0, 0.0})}, mc(50000));
    CHECK(r.pass);
    CHECK(r.probes.front().error_bound > 0.0);
}
