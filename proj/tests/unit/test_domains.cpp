#include <cmath>

#include "doctest.h"
#include "s3bs/domains.hpp"
#include "s3bs/errors.hpp"
#include "s3bs/fields.hpp"
#include "s3bs/quadrature.hpp"
#include "test_support.hpp"

using namespace s3bs;

namespace {

const Point p0 = Point::identity();

QuadratureSpec spec_of(Backend b, std::size_t n, std::uint64_t seed = 3) {
    QuadratureSpec s;
    s.backend = b;
    s.n_samples = n;
    s.seed = seed;
    return s;
}

template <class Nodes>
double weight_sum(const Nodes& v) {
    double s = 0.0;
    for (const auto& n : v) {
        if constexpr (requires { n.area_weight; }) {
            s += n.area_weight;
        } else {
            s += n.weight;
        }
    }
    return s;
}

double ball_volume(double r) { return 2 * kPi * (r - std::sin(r) * std::cos(r)); }

}  // namespace

TEST_CASE("membership") {
    const Domain ball = Domain::ball(p0, 1.0);
    CHECK(Domain::full_sphere().contains(p0.antipode()));
    CHECK(ball.contains(p0));
    CHECK_FALSE(ball.contains(p0.antipode()));
    CHECK(Domain::complement(ball).contains(p0.antipode()));
    CHECK_FALSE(Domain::complement(ball).contains(p0));

    const Domain torus = Domain::solid_torus(0.5);
    CHECK(torus.contains(Point::unchecked({0.0, 1.0, 0.0, 0.0})));
    CHECK_FALSE(torus.contains(Point::unchecked({0.0, 0.0, 1.0, 0.0})));
    CHECK(Domain::torus_radius(Point(Vec4{std::cos(0.4), 0.0, std::sin(0.4), 0.0})) == doctest::Approx(0.4));

    const Domain shell = Domain::shell(p0, 0.5, 1.2);
    CHECK_FALSE(shell.contains(p0));
    CHECK(shell.contains(Point(Vec4{std::cos(0.8), std::sin(0.8), 0.0, 0.0})));
}

TEST_CASE("closed-form volumes and areas") {
    CHECK(Domain::full_sphere().volume() == doctest::Approx(2 * kPi * kPi));
    CHECK(Domain::ball(p0, kPi).volume() == doctest::Approx(2 * kPi * kPi));
    CHECK(Domain::ball(p0, 1.0).volume() == doctest::Approx(ball_volume(1.0)));
    CHECK(Domain::solid_torus(0.5).volume() == doctest::Approx(2 * kPi * kPi * std::pow(std::sin(0.5), 2)));
    CHECK(Domain::shell(p0, 0.5, 1.2).volume() == doctest::Approx(ball_volume(1.2) - ball_volume(0.5)));
    CHECK(Domain::complement(Domain::ball(p0, 1.0)).volume() ==
          doctest::Approx(2 * kPi * kPi - ball_volume(1.0)));
    CHECK(Domain::ball(p0, 1.0).boundary_area() == doctest::Approx(4 * kPi * std::pow(std::sin(1.0), 2)));
    CHECK(Domain::solid_torus(0.5).boundary_area() ==
          doctest::Approx(4 * kPi * kPi * std::sin(0.5) * std::cos(0.5)));
    CHECK_FALSE(Domain::full_sphere().has_boundary());
}

TEST_CASE("complement of complement is the original domain") {
    const Domain ball = Domain::ball(p0, 0.7);
    const Domain cc = Domain::complement(Domain::complement(ball));
    CHECK(std::holds_alternative<Domain::Ball>(cc.shape()));
    CHECK(cc.volume() == ball.volume());
}

TEST_CASE("volume weights sum to the volume") {
    const Domain domains[] = {Domain::full_sphere(), Domain::ball(p0, 1.0), Domain::shell(p0, 0.5, 1.2),
                              Domain::solid_torus(0.5), Domain::complement(Domain::solid_torus(0.5))};
    for (const Domain& d : domains) {
        for (Backend b : {Backend::monte_carlo, Backend::stratified_grid}) {
            const auto nodes = d.sample_volume(spec_of(b, 20000));
            CHECK(weight_sum(nodes.nodes) == doctest::Approx(d.volume()).epsilon(1e-10));
            for (const auto& n : nodes.nodes) CHECK(d.contains(n.point));
        }
    }
}

TEST_CASE("torus acceptance fraction of uniform points") {
    auto r = test::rng(21);
    const Domain torus = Domain::solid_torus(0.5);
    const int n = 100000;
    int hits = 0;
    for (int k = 0; k < n; ++k) hits += torus.contains(r.s3_uniform()) ? 1 : 0;
    const double p = std::pow(std::sin(0.5), 2);
    const double stderr_ = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(static_cast<double>(hits) / n - p) < 3 * stderr_);
}

TEST_CASE("Monte Carlo and grid agree on a smooth integral") {
    const Domain ball = Domain::ball(p0, 1.0);
    auto f = [](const Point& x) { return x[0]; };  // cos alpha(p0, x)
    const double exact = 4 * kPi * std::pow(std::sin(1.0), 3) / 3;
    const auto mc = integrate_volume(ball, f, spec_of(Backend::monte_carlo, 40000));
    const auto grid = integrate_volume(ball, f, spec_of(Backend::stratified_grid, 40000));
    CHECK(std::abs(mc.value - exact) < 3 * mc.error_bound);
    CHECK(std::abs(grid.value - exact) < 1e-4);
    CHECK(std::abs(mc.value - grid.value) < 3 * (mc.error_bound + grid.error_bound));
}

TEST_CASE("boundary samples") {
    const Domain ball = Domain::ball(p0, 1.0);
    const Domain shell = Domain::shell(p0, 0.5, 1.2);
    const Domain torus = Domain::solid_torus(0.5);
    const Domain comp = Domain::complement(ball);
    for (const Domain* d : {&ball, &shell, &torus, &comp}) {
        for (Backend b : {Backend::monte_carlo, Backend::stratified_grid}) {
            const auto nodes = d->sample_boundary(spec_of(b, 4000));
            CHECK(weight_sum(nodes.nodes) == doctest::Approx(d->boundary_area()).epsilon(1e-10));
            for (const auto& s : nodes.nodes) {
                CHECK(s.normal.length() == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(std::abs(dot(s.normal.vec, s.point.coords())) < 1e-12);
                CHECK(d->distance_to_boundary(s.point) < 1e-12);
                // A short geodesic step along the normal leaves the domain.
                const double t = 1e-4;
                const Point out(std::cos(t) * s.point.coords() + std::sin(t) * s.normal.vec);
                const Point in(std::cos(t) * s.point.coords() - std::sin(t) * s.normal.vec);
                CHECK_FALSE(d->contains(out));
                CHECK(d->contains(in));
            }
        }
    }
    CHECK_THROWS_AS(Domain::full_sphere().sample_boundary(spec_of(Backend::monte_carlo, 1000)), NoBoundary);
}

TEST_CASE("boundary integrals") {
    const Domain ball = Domain::ball(p0, 1.0);
    const auto spec = spec_of(Backend::monte_carlo, 20000);
    // Divergence theorem for the tangential part of a constant vector e:
    // oint n.e dA = int div(e - (e.x) x) dx = -3 int e.x dx, so oint n dA = -4 pi sin^3(r) p.
    const auto n = integrate_boundary(ball, [](const BoundarySample& b) { return b.normal.vec; }, spec);
    const Vec4 expected = -4 * kPi * std::pow(std::sin(1.0), 3) * p0.coords();
    CHECK(norm(n.value - expected) < 3 * n.error_bound + 1e-12);
    // Frame field tangent to the torus boundary.
    const VectorField u1 = frame_field(1);
    const auto flux = integrate_boundary(
        Domain::solid_torus(0.5), [&](const BoundarySample& b) { return dot(u1(b.point).vec, b.normal.vec); }, spec);
    CHECK(std::abs(flux.value) < 1e-12);
}

TEST_CASE("divergence theorem") {
    const Domain ball = Domain::ball(p0, 1.0);
    const VectorField v = gradient_field(ScalarField::CosDistance{p0, 0.0});
    const auto spec = spec_of(Backend::monte_carlo, 40000);
    const auto vol = integrate_volume(ball, [&](const Point& x) { return v.divergence(x); }, spec);
    const auto bnd =
        integrate_boundary(ball, [&](const BoundarySample& b) { return dot(v(b.point).vec, b.normal.vec); }, spec);
    CHECK(std::abs(vol.value - bnd.value) < 3 * (vol.error_bound + bnd.error_bound));
}

TEST_CASE("left translation of domains") {
    const Point q(Vec4{0.5, 0.5, -0.5, 0.5});
    const Domain ball = Domain::ball(p0, 0.8);
    const Domain moved = ball.left_translated(q);
    auto r = test::rng(22);
    for (int k = 0; k < 200; ++k) {
        const Point x = r.s3_uniform();
        CHECK(moved.contains(q * x) == ball.contains(x));
    }
    CHECK_THROWS_AS(Domain::solid_torus(0.5).left_translated(q), DomainError);
}

TEST_CASE("invalid parameters and specs") {
    CHECK_THROWS_AS(Domain::ball(p0, 0.0), DomainError);
    CHECK_THROWS_AS(Domain::solid_torus(2.0), DomainError);
    CHECK_THROWS_AS(Domain::shell(p0, 1.0, 0.5), DomainError);
    QuadratureSpec s;
    s.n_samples = 10;
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
    s = {};
    s.excision_radius = 1.0;
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
    s = {};
    s.batch_size = 0;
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
    CHECK(backend_from_string(to_string(Backend::stratified_grid)) == Backend::stratified_grid);
    CHECK_THROWS_AS(backend_from_string("simpson"), InvalidSpec);
}
