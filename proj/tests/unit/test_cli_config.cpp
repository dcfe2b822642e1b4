#include <cstring>
#include <sstream>
#include <string>

#include "doctest.h"
#include "runner.hpp"
#include "s3bs/errors.hpp"

using namespace s3bs;
using namespace s3bs::cli;
using json = nlohmann::ordered_json;

namespace {

json base(const char* experiment) {
    return json{{"schema_version", 1}, {"experiment", experiment}, {"seed", 3}};
}

json ball_domain() { return json{{"type", "ball"}, {"center", {1, 0, 0, 0}}, {"radius", 1.0}}; }

std::string error_of(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal config") {
    const ExperimentConfig c = parse_config(base("key_lemma"));
    CHECK(c.experiment == Experiment::key_lemma);
    CHECK(c.seed == 3);
    CHECK(c.samples == 100);
    CHECK(to_string(c.experiment) == "key_lemma");
}

TEST_CASE("errors name the offending key") {
    json j = base("bs_eval");
    j["domain"] = json{{"type", "ball"}, {"center", {1, 0, 0, 0}}, {"radius", 1.0}, {"radious", 2.0}};
    j["field"] = json{{"type", "frame"}, {"index", 1}};
    j["probes"] = json::array({{1, 0, 0, 0}});
    CHECK(error_of(j).find("domain.radious") != std::string::npos);

    j["domain"] = json{{"type", "cube"}};
    CHECK(error_of(j).find("domain.type") != std::string::npos);

    j["domain"] = ball_domain();
    j["field"]["index"] = 4;
    CHECK(error_of(j).find("field.index") != std::string::npos);

    j["field"]["index"] = 1;
    j["quadrature"] = json{{"n_samples", 10}};
    CHECK(error_of(j).find("quadrature") != std::string::npos);

    json k = base("key_lemma");
    k.erase("seed");
    CHECK(error_of(k).find("seed") != std::string::npos);
    k = base("key_lemma");
    k["schema_version"] = 2;
    CHECK(error_of(k).find("schema_version") != std::string::npos);
    k = base("key_lemma");
    k["sed"] = 1;
    CHECK(error_of(k).find("sed") != std::string::npos);
    CHECK(error_of(base("curl_check")).find("domain") != std::string::npos);
    CHECK(error_of(base("teleport")).find("experiment") != std::string::npos);
}

TEST_CASE("nested descriptors") {
    const Domain d = parse_domain(json{{"type", "complement"}, {"of", {{"type", "solid_torus"}, {"a", 0.5}}}}, "domain");
    CHECK(d.volume() == doctest::Approx(2 * kPi * kPi * (1 - std::pow(std::sin(0.5), 2))));
    const Domain t = parse_domain(json{{"type", "left_translated"}, {"by", {0, 1, 0, 0}}, {"of", ball_domain()}}, "d");
    CHECK(t.contains(Point::unchecked({0, 1, 0, 0})));

    const VectorField v = parse_field(
        json{{"type", "combination"},
             {"terms", {{{"coeff", 2.0}, {"field", {{"type", "frame"}, {"index", 2}}}},
                        {{"coeff", 1.0}, {"field", {{"type", "gradient"}, {"of", {{"type", "constant"}, {"value", 1}}}}}}}}},
        "field");
    const Point x(Vec4{0.1, 0.2, 0.3, 0.4});
    CHECK(norm(v(x).vec - 2.0 * frame_field(2)(x).vec) < 1e-15);
    const ScalarField s = parse_scalar(json{{"type", "cot_distance"}, {"center", {1, 0, 0, 0}}, {"coeff", 2.0}}, "p");
    CHECK(s(Point(Vec4{1, 1, 0, 0})) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(parse_scalar(json{{"type", "linear"}, {"e", {0, 0, 0}}}, "p"), ConfigError);
    CHECK_THROWS_AS(parse_domain(json{{"type", "ball"}, {"center", {0, 0, 0, 0}}, {"radius", 1.0}}, "d"), ConfigError);
}

TEST_CASE("probe rules keep a margin from the boundary") {
    const Domain ball = Domain::ball(Point::identity(), 1.0);
    for (auto kind : {ProbeRule::Kind::random_inside, ProbeRule::Kind::random_outside, ProbeRule::Kind::random_sphere}) {
        ProbeRule r;
        r.kind = kind;
        r.count = 20;
        const auto pts = resolve_probes(r, &ball, 4, 0.1);
        CHECK(pts.size() == 20);
        for (const Point& p : pts) {
            CHECK(ball.distance_to_boundary(p) >= 0.1);
            if (kind == ProbeRule::Kind::random_inside) CHECK(ball.contains(p));
            if (kind == ProbeRule::Kind::random_outside) CHECK_FALSE(ball.contains(p));
        }
        // Same seed, same probes.
        const auto again = resolve_probes(r, &ball, 4, 0.1);
        CHECK(std::memcmp(&again[7], &pts[7], sizeof(Point)) == 0);
    }
    ProbeRule core;
    core.kind = ProbeRule::Kind::core_circle;
    core.count = 4;
    for (const Point& p : resolve_probes(core, nullptr, 1, 0.0)) CHECK(Domain::torus_radius(p) < 1e-12);
}

TEST_CASE("report payload is deterministic and complete") {
    json j = base("key_lemma");
    j["samples"] = 10;
    const ExperimentConfig c = parse_config(j);
    const RunReport a = run_experiment(c, Exec{1});
    const RunReport b = run_experiment(c, Exec{2});
    CHECK(a.pass);
    CHECK(to_json(a, false).dump() == to_json(b, false).dump());
    const json doc = to_json(a);
    CHECK(doc["schema_version"] == kSchemaVersion);
    CHECK(doc["tool"] == "s3bs");
    CHECK(doc.contains("wall_time_s"));
    CHECK(doc["config"]["seed"] == 3);
    for (const auto& check : doc["checks"]) {
        CHECK(check.contains("max_residual"));
        // Bounds live on the probes when there are any, otherwise on the check.
        const json& carrier = check.contains("probes") ? check["probes"][0] : check;
        CHECK(carrier.contains("error_bound"));
        CHECK(carrier.contains("tolerance"));
    }
    std::ostringstream csv;
    write_csv(a, csv);
    CHECK(csv.str().rfind("check,probe,x0,x1,x2,x3,inside,residual,error_bound,tolerance,pass\n", 0) == 0);
    CHECK(!tool_version().empty());
}

TEST_CASE("unreadable files are config errors") {
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
