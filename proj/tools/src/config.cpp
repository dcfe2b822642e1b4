#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "s3bs/errors.hpp"

namespace s3bs::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config key '" + path + "': " + what);
}

// Reads one JSON object, remembering which keys were consumed so unknown
// keys can be rejected.
class Object {
public:
    Object(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    std::string at(const std::string& key) const { return join(path_, key); }

    const Json& get(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) fail(at(key), "required key is missing");
        return j_.at(key);
    }

    const Json* find(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    double number(const std::string& key) {
        const Json& v = get(key);
        if (!v.is_number()) fail(at(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(at(key), "expected a finite number");
        return d;
    }
    std::optional<double> opt_number(const std::string& key) {
        if (!has(key)) {
            seen_.insert(key);
            return std::nullopt;
        }
        return number(key);
    }

    std::uint64_t count(const std::string& key) {
        const Json& v = get(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
            fail(at(key), "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string& key) {
        const Json& v = get(key);
        if (!v.is_string()) fail(at(key), "expected a string");
        return v.get<std::string>();
    }

    bool boolean(const std::string& key) {
        const Json& v = get(key);
        if (!v.is_boolean()) fail(at(key), "expected true or false");
        return v.get<bool>();
    }

    void done() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) fail(at(it.key()), "unknown key");
        }
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

Vec4 parse_vec4(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4) fail(path, "expected an array of 4 numbers");
    Vec4 v;
    for (std::size_t i = 0; i < 4; ++i) {
        if (!j[i].is_number()) fail(path, "expected an array of 4 numbers");
        v[i] = j[i].get<double>();
        if (!std::isfinite(v[i])) fail(path, "expected finite numbers");
    }
    return v;
}

Point parse_point(const Json& j, const std::string& path) {
    const Vec4 v = parse_vec4(j, path);
    if (norm(v) == 0.0) fail(path, "a point must be a nonzero 4-vector");
    return Point(v);
}

// Domain and field constructors raise library errors for invalid
// parameters; in a config these are config errors at the given key.
template <class F>
auto guarded(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

Experiment parse_experiment(const std::string& name, const std::string& path) {
    static const std::pair<const char*, Experiment> names[] = {
        {"bs_eval", Experiment::bs_eval},           {"curl_check", Experiment::curl_check},
        {"div_check", Experiment::div_check},       {"key_lemma", Experiment::key_lemma},
        {"vxn_identity", Experiment::vxn_identity}, {"helicity", Experiment::helicity},
        {"self_adjoint", Experiment::self_adjoint}, {"kernel_check", Experiment::kernel_check},
        {"energy_check", Experiment::energy_check}, {"maxwell_suite", Experiment::maxwell_suite},
    };
    for (const auto& [n, e] : names) {
        if (name == n) return e;
    }
    fail(path, "unknown experiment '" + name + "'");
}

QuadratureSpec parse_quadrature(const Json& j, const std::string& path, std::uint64_t seed) {
    Object o(j, path);
    QuadratureSpec s;
    s.seed = seed;
    if (const Json* b = o.find("backend")) {
        if (!b->is_string()) fail(o.at("backend"), "expected a string");
        s.backend = guarded(o.at("backend"), [&] { return backend_from_string(b->get<std::string>()); });
    }
    if (o.has("n_samples")) s.n_samples = o.count("n_samples");
    if (o.has("excision_radius")) s.excision_radius = o.number("excision_radius");
    if (o.has("batch_size")) s.batch_size = o.count("batch_size");
    o.done();
    guarded(path, [&] {
        s.validate();
        return 0;
    });
    return s;
}

FDScheme parse_fd(const Json& j, const std::string& path) {
    Object o(j, path);
    FDScheme fd;
    if (o.has("h")) fd.h = o.number("h");
    if (o.has("richardson")) fd.richardson = o.boolean("richardson");
    o.done();
    guarded(path, [&] {
        fd.validate();
        return 0;
    });
    return fd;
}

ProbeRule parse_probes(const Json& j, const std::string& path) {
    ProbeRule r;
    if (j.is_array()) {
        if (j.empty()) fail(path, "probe list is empty");
        for (std::size_t i = 0; i < j.size(); ++i) {
            r.points.push_back(parse_point(j[i], path + "[" + std::to_string(i) + "]"));
        }
        return r;
    }
    Object o(j, path);
    const std::string rule = o.string("rule");
    if (rule == "random_inside") {
        r.kind = ProbeRule::Kind::random_inside;
    } else if (rule == "random_outside") {
        r.kind = ProbeRule::Kind::random_outside;
    } else if (rule == "core_circle") {
        r.kind = ProbeRule::Kind::core_circle;
    } else if (rule == "random_sphere") {
        r.kind = ProbeRule::Kind::random_sphere;
    } else {
        fail(o.at("rule"), "unknown probe rule '" + rule + "'");
    }
    r.count = o.count("count");
    if (r.count == 0 || r.count > 100000) fail(o.at("count"), "must lie in [1, 100000]");
    o.done();
    return r;
}

MethodChoice parse_method(const std::string& name, const std::string& path) {
    if (name == "both") return MethodChoice::both;
    const BSMethod m = guarded(path, [&] { return bs_method_from_string(name); });
    return m == BSMethod::parallel_transport ? MethodChoice::parallel_transport : MethodChoice::left_translation;
}

Tolerance parse_tolerance(const Json& j, const std::string& path) {
    Object o(j, path);
    Tolerance t;
    const auto positive = [&](const char* key, std::optional<double>& v) {
        v = o.opt_number(key);
        if (v && !(*v > 0.0)) fail(o.at(key), "must be positive");
    };
    positive("relative", t.relative);
    positive("absolute", t.absolute);
    positive("k_bounds", t.k_bounds);
    o.done();
    return t;
}

struct Needs {
    bool domain = true;
    bool field = true;
    bool probes = false;
    bool inner = false;
};

Needs needs_of(Experiment e) {
    switch (e) {
        case Experiment::bs_eval:
        case Experiment::curl_check:
        case Experiment::div_check:
        case Experiment::vxn_identity:
        case Experiment::maxwell_suite: return {true, true, true, false};
        case Experiment::key_lemma: return {false, false, false, false};
        case Experiment::helicity:
        case Experiment::self_adjoint:
        case Experiment::energy_check: return {true, true, false, true};
        case Experiment::kernel_check: return {true, false, true, false};
    }
    return {};
}

}  // namespace

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::bs_eval: return "bs_eval";
        case Experiment::curl_check: return "curl_check";
        case Experiment::div_check: return "div_check";
        case Experiment::key_lemma: return "key_lemma";
        case Experiment::vxn_identity: return "vxn_identity";
        case Experiment::helicity: return "helicity";
        case Experiment::self_adjoint: return "self_adjoint";
        case Experiment::kernel_check: return "kernel_check";
        case Experiment::energy_check: return "energy_check";
        case Experiment::maxwell_suite: return "maxwell_suite";
    }
    return "?";
}

Domain parse_domain(const Json& j, const std::string& path) {
    Object o(j, path);
    const std::string type = o.string("type");
    Domain d = guarded(path, [&]() -> Domain {
        if (type == "full_sphere") return Domain::full_sphere();
        if (type == "ball") {
            return Domain::ball(parse_point(o.get("center"), o.at("center")), o.number("radius"));
        }
        if (type == "shell") {
            return Domain::shell(parse_point(o.get("center"), o.at("center")), o.number("inner"), o.number("outer"));
        }
        if (type == "solid_torus") return Domain::solid_torus(o.number("a"));
        if (type == "complement") return Domain::complement(parse_domain(o.get("of"), o.at("of")));
        if (type == "left_translated") {
            const Point q = parse_point(o.get("by"), o.at("by"));
            return parse_domain(o.get("of"), o.at("of")).left_translated(q);
        }
        fail(o.at("type"), "unknown domain type '" + type + "'");
    });
    o.done();
    return d;
}

ScalarField parse_scalar(const Json& j, const std::string& path) {
    Object o(j, path);
    const std::string type = o.string("type");
    ScalarField f = [&]() -> ScalarField {
        if (type == "constant") return ScalarField::Constant{o.number("value")};
        if (type == "linear") return ScalarField::Linear{parse_vec4(o.get("e"), o.at("e"))};
        if (type == "cos_distance") {
            return ScalarField::CosDistance{parse_point(o.get("center"), o.at("center")),
                                            o.opt_number("offset").value_or(0.0)};
        }
        if (type == "cot_distance") {
            return ScalarField::CotDistance{parse_point(o.get("center"), o.at("center")),
                                            o.opt_number("coeff").value_or(1.0)};
        }
        fail(o.at("type"), "unknown scalar field type '" + type + "'");
    }();
    o.done();
    return f;
}

VectorField parse_field(const Json& j, const std::string& path) {
    Object o(j, path);
    const std::string type = o.string("type");
    VectorField v = guarded(path, [&]() -> VectorField {
        if (type == "frame") {
            const auto i = o.count("index");
            if (i < 1 || i > 3) fail(o.at("index"), "must be 1, 2 or 3");
            return frame_field(static_cast<int>(i));
        }
        if (type == "gradient") return gradient_field(parse_scalar(o.get("of"), o.at("of")));
        if (type == "longitude") return longitude_field_W();
        if (type == "combination") {
            const Json& terms = o.get("terms");
            if (!terms.is_array() || terms.empty()) fail(o.at("terms"), "expected a non-empty array");
            std::vector<std::pair<double, VectorField>> parsed;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                const std::string tp = o.at("terms") + "[" + std::to_string(i) + "]";
                Object t(terms[i], tp);
                const double c = t.number("coeff");
                parsed.emplace_back(c, parse_field(t.get("field"), t.at("field")));
                t.done();
            }
            return combine(std::move(parsed));
        }
        if (type == "pushforward") {
            return pushforward(parse_point(o.get("by"), o.at("by")), parse_field(o.get("field"), o.at("field")));
        }
        fail(o.at("type"), "unknown field type '" + type + "'");
    });
    o.done();
    return v;
}

ExperimentConfig parse_config(const Json& doc) {
    Object o(doc, "");
    ExperimentConfig c;
    c.raw = doc;
    const Json& version = o.get("schema_version");
    if (!version.is_number_integer() || version.get<long long>() != kSchemaVersion) {
        fail("schema_version", "this tool reads schema version " + std::to_string(kSchemaVersion));
    }
    c.experiment = parse_experiment(o.string("experiment"), "experiment");
    c.seed = o.count("seed");
    const Needs needs = needs_of(c.experiment);

    if (const Json* q = o.find("quadrature")) c.quadrature = parse_quadrature(*q, "quadrature", c.seed);
    else c.quadrature.seed = c.seed;
    if (const Json* q = o.find("inner_quadrature")) {
        c.inner_quadrature = parse_quadrature(*q, "inner_quadrature", c.seed);
    }
    if (needs.inner && !c.inner_quadrature) fail("inner_quadrature", "required for " + to_string(c.experiment));

    if (needs.domain) c.domain = parse_domain(o.get("domain"), "domain");
    else if (o.has("domain")) c.domain = parse_domain(o.get("domain"), "domain");

    if (needs.field) c.field = parse_field(o.get("field"), "field");
    else if (o.has("field")) c.field = parse_field(o.get("field"), "field");

    if (c.experiment == Experiment::self_adjoint) c.second_field = parse_field(o.get("second_field"), "second_field");
    if (c.experiment == Experiment::kernel_check) c.potential = parse_scalar(o.get("potential"), "potential");

    if (needs.probes) c.probes = parse_probes(o.get("probes"), "probes");

    if (const Json* m = o.find("method")) {
        if (!m->is_string()) fail("method", "expected a string");
        c.method = parse_method(m->get<std::string>(), "method");
        if (c.method == MethodChoice::both && c.experiment != Experiment::bs_eval) {
            fail("method", "'both' is only meaningful for bs_eval");
        }
    }
    if (const Json* t = o.find("tolerance")) c.tolerance = parse_tolerance(*t, "tolerance");

    if (const Json* e = o.find("expected")) {
        if (c.experiment == Experiment::bs_eval) {
            c.expected_field = parse_field(*e, "expected");
        } else if (c.experiment == Experiment::helicity) {
            if (!e->is_number()) fail("expected", "expected a number");
            c.expected_value = e->get<double>();
        } else {
            fail("expected", "not used by " + to_string(c.experiment));
        }
    }
    if (const Json* f = o.find("finite_difference")) c.finite_difference = parse_fd(*f, "finite_difference");
    if (c.experiment == Experiment::key_lemma) {
        if (o.has("samples")) c.samples = o.count("samples");
        if (c.samples == 0 || c.samples > 1000000) fail("samples", "must lie in [1, 1000000]");
        if (const Json* a = o.find("alpha_range")) {
            if (!a->is_array() || a->size() != 2 || !(*a)[0].is_number() || !(*a)[1].is_number()) {
                fail("alpha_range", "expected [min, max]");
            }
            c.alpha_min = (*a)[0].get<double>();
            c.alpha_max = (*a)[1].get<double>();
            if (!(c.alpha_min > 0.1 && c.alpha_min < c.alpha_max && c.alpha_max < 3.0)) {
                fail("alpha_range", "must satisfy 0.1 < min < max < 3");
            }
        }
    }
    if (const Json* out = o.find("output")) {
        if (!out->is_string()) fail("output", "expected a string");
        c.output = out->get<std::string>();
    }
    o.done();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

}  // namespace s3bs::cli
