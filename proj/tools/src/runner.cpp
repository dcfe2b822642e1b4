#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "s3bs/errors.hpp"
#include "s3bs/random.hpp"

#ifndef S3BS_VERSION
#define S3BS_VERSION "0.0.0"
#endif

namespace s3bs::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kBsRelTol = 0.02;
constexpr double kKeyLemmaTol = 1e-5;
constexpr double kDefaultKBounds = 3.0;
constexpr std::size_t kMaxProbeDraws = 1000000;

// Rethrows a library error of the same type with context prepended.
template <class F>
auto with_context(const std::string& context, F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        throw ConfigError(context + ": " + e.what());
    } catch (const NonFiniteIntegrand& e) {
        throw NonFiniteIntegrand(context + ": " + e.what());
    } catch (const ProbeTooCloseToBoundary& e) {
        throw ProbeTooCloseToBoundary(context + ": " + e.what());
    } catch (const WrongClass& e) {
        throw WrongClass(context + ": " + e.what());
    } catch (const UnknownClass& e) {
        throw UnknownClass(context + ": " + e.what());
    } catch (const InvalidSpec& e) {
        throw InvalidSpec(context + ": " + e.what());
    } catch (const DomainError& e) {
        throw DomainError(context + ": " + e.what());
    } catch (const DegeneratePair& e) {
        throw DegeneratePair(context + ": " + e.what());
    }
}

std::string describe(const Point& p) {
    std::ostringstream os;
    os.precision(6);
    os << "probe (" << p[0] << ", " << p[1] << ", " << p[2] << ", " << p[3] << ")";
    return os.str();
}

Json vec_json(const Vec4& v) { return Json::array({v[0], v[1], v[2], v[3]}); }

BSMethod single_method(MethodChoice m) {
    return m == MethodChoice::left_translation ? BSMethod::left_translation : BSMethod::parallel_transport;
}

// Margin the identity checks demand between probes and the boundary.
double check_margin(const ExperimentConfig& c, const FDScheme& fd) {
    switch (c.experiment) {
        case Experiment::curl_check:
        case Experiment::div_check:
        case Experiment::maxwell_suite: return 2.0 * (fd.h + c.quadrature.excision_radius) * 1.05;
        default: return 0.0;
    }
}

CheckOptions check_options(const ExperimentConfig& c, const Exec& exec) {
    CheckOptions o;
    o.method = single_method(c.method);
    if (c.finite_difference) o.fd = *c.finite_difference;
    o.rel_tol = c.tolerance.relative;
    o.exec = exec;
    return o;
}

DoubleSpec double_spec(const ExperimentConfig& c) {
    DoubleSpec d;
    d.outer = c.quadrature;
    d.inner = *c.inner_quadrature;
    return d;
}

IdentityReport bs_report(const std::string& name, const BiotSavart& bs, const std::vector<Point>& probes,
                         const ExperimentConfig& c, std::vector<BSResult>& results) {
    IdentityReport r;
    r.name = name;
    r.scale = bs.scale().sup_v;
    const double rel = c.tolerance.relative.value_or(kBsRelTol);
    if (!c.expected_field) r.note = "no expected field given; values reported without a reference";
    for (const Point& y : probes) {
        const BSResult b = with_context(describe(y), [&] { return bs.evaluate(y); });
        results.push_back(b);
        ProbeResult pr;
        pr.probe = y;
        pr.inside = bs.domain().contains(y);
        pr.value = b.value.vec;
        pr.error_bound = b.error_bound;
        if (c.expected_field) {
            pr.expected = with_context(describe(y), [&] { return (*c.expected_field)(y).vec; });
            pr.residual = norm(pr.value - pr.expected);
            const double ref = norm(pr.expected);
            pr.tolerance = rel * (ref > 0.0 ? ref : r.scale);
        }
        r.probes.push_back(pr);
    }
    r.finalize();
    return r;
}

std::vector<IdentityReport> run_bs_eval(const ExperimentConfig& c, const std::vector<Point>& probes,
                                        const Exec& exec) {
    std::vector<BSMethod> methods;
    if (c.method == MethodChoice::both) methods = {BSMethod::parallel_transport, BSMethod::left_translation};
    else methods = {single_method(c.method)};
    std::vector<IdentityReport> out;
    std::vector<std::vector<BSResult>> results(methods.size());
    for (std::size_t i = 0; i < methods.size(); ++i) {
        BSOptions opts;
        opts.method = methods[i];
        const BiotSavart bs(*c.field, *c.domain, c.quadrature, opts, exec);
        out.push_back(bs_report("bs_" + to_string(methods[i]), bs, probes, c, results[i]));
    }
    if (methods.size() == 2) {
        IdentityReport agree;
        agree.name = "method_agreement";
        agree.scale = out.front().scale;
        for (std::size_t k = 0; k < probes.size(); ++k) {
            const BSResult& a = results[0][k];
            const BSResult& b = results[1][k];
            ProbeResult pr;
            pr.probe = probes[k];
            pr.inside = c.domain->contains(probes[k]);
            pr.value = a.value.vec;
            pr.expected = b.value.vec;
            pr.residual = norm(a.value.vec - b.value.vec);
            pr.error_bound = a.error_bound + b.error_bound;
            pr.tolerance = pr.error_bound;
            agree.probes.push_back(pr);
        }
        agree.finalize();
        out.push_back(agree);
    }
    return out;
}

std::vector<IdentityReport> run_key_lemma(const ExperimentConfig& c) {
    const FDScheme fd = c.finite_difference.value_or(FDScheme{1e-3, true});
    const double tol = c.tolerance.absolute.value_or(kKeyLemmaTol);
    IdentityReport phi, phi0, claim;
    phi.name = "key_lemma_phi";
    phi0.name = "key_lemma_phi0";
    claim.name = "claim";
    SubStream rng(c.seed, StreamTag::probes, 1);
    std::size_t done = 0;
    for (std::size_t draws = 0; done < c.samples; ++draws) {
        if (draws > kMaxProbeDraws) throw ConfigError("alpha_range: too few draws land in the range");
        const Point x = rng.s3_uniform();
        const Point y = rng.s3_uniform();
        const Vec4 w{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double a = geodesic_distance(x, y);
        if (a < c.alpha_min || a > c.alpha_max) continue;
        const TangentVector v(x, w);
        ++done;
        const auto add = [&](IdentityReport& r, double res) {
            ProbeResult pr;
            pr.probe = y;
            pr.value = v.vec;
            pr.expected = x.coords();
            pr.residual = res;
            pr.tolerance = tol;
            r.probes.push_back(pr);
        };
        add(phi, key_lemma_residual(x, y, v, fd, Potential::phi));
        add(phi0, key_lemma_residual(x, y, v, fd, Potential::phi0));
        add(claim, claim_residual(x, y, v, fd));
    }
    for (auto* r : {&phi, &phi0, &claim}) {
        r->scale = 1.0;
        r->note = "probe is y; value holds v and expected holds x";
        r->finalize();
    }
    return {phi, phi0, claim};
}

IdentityReport run_helicity(const ExperimentConfig& c, const Exec& exec) {
    const ScalarEstimate h = helicity(*c.field, *c.domain, double_spec(c), single_method(c.method), exec);
    IdentityReport r;
    r.name = "helicity";
    r.error_bound = h.error_bound;
    r.metrics = {{"helicity", h.value}, {"helicity_error", h.error_bound}};
    if (c.expected_value) {
        const double e = *c.expected_value;
        r.scale = std::abs(e);
        r.max_residual = std::abs(h.value - e);
        if (c.tolerance.absolute) r.tolerance = *c.tolerance.absolute;
        else r.tolerance = c.tolerance.relative.value_or(0.03) * std::abs(e);
        r.metrics.emplace_back("expected", e);
    } else {
        r.note = "no expected value given; helicity reported without a reference";
    }
    r.finalize();
    return r;
}

}  // namespace

std::string tool_version() { return S3BS_VERSION; }

std::vector<Point> resolve_probes(const ProbeRule& rule, const Domain* omega, std::uint64_t seed, double margin) {
    using Kind = ProbeRule::Kind;
    if (rule.kind == Kind::list) return rule.points;
    std::vector<Point> out;
    if (rule.kind == Kind::core_circle) {
        // Equally spaced on the circle x3 = x4 = 0.
        for (std::size_t k = 0; k < rule.count; ++k) {
            const double t = 2.0 * kPi * (static_cast<double>(k) + 0.25) / static_cast<double>(rule.count);
            out.push_back(Point::unchecked({std::cos(t), std::sin(t), 0.0, 0.0}));
        }
        return out;
    }
    SubStream rng(seed, StreamTag::probes, 0);
    for (std::size_t draws = 0; out.size() < rule.count; ++draws) {
        if (draws > kMaxProbeDraws) {
            throw ConfigError("config key 'probes': could not place " + std::to_string(rule.count) +
                              " probes satisfying the rule");
        }
        const Point p = rng.s3_uniform();
        if (rule.kind != Kind::random_sphere) {
            if (!omega) throw ConfigError("config key 'probes': rule needs a domain");
            if (omega->contains(p) != (rule.kind == Kind::random_inside)) continue;
        }
        if (omega && margin > 0.0 && omega->distance_to_boundary(p) < margin) continue;
        out.push_back(p);
    }
    return out;
}

RunReport run_experiment(const ExperimentConfig& c, const Exec& exec) {
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.experiment = c.experiment;
    report.config = c.raw;
    const std::string ctx = to_string(c.experiment);
    const CheckOptions opts = check_options(c, exec);
    std::vector<Point> probes;
    if (c.probes) {
        probes = resolve_probes(*c.probes, c.domain ? &*c.domain : nullptr, c.seed, check_margin(c, opts.fd));
    }
    const double k = c.tolerance.k_bounds.value_or(kDefaultKBounds);

    report.checks = with_context(ctx, [&]() -> std::vector<IdentityReport> {
        switch (c.experiment) {
            case Experiment::bs_eval: return run_bs_eval(c, probes, exec);
            case Experiment::curl_check: return {verify_curl_bs(*c.field, *c.domain, probes, c.quadrature, opts)};
            case Experiment::div_check: return {verify_div_bs(*c.field, *c.domain, probes, c.quadrature, opts)};
            case Experiment::key_lemma: return run_key_lemma(c);
            case Experiment::vxn_identity:
                return {integral_identity_vxn(*c.field, *c.domain, probes, c.quadrature, k, exec)};
            case Experiment::helicity: return {run_helicity(c, exec)};
            case Experiment::self_adjoint:
                return {self_adjointness_check(*c.field, *c.second_field, *c.domain, double_spec(c), k, opts)};
            case Experiment::kernel_check:
                return {kernel_check(*c.potential, *c.domain, probes, c.quadrature, opts)};
            case Experiment::energy_check:
                return {energy_inequality_check(*c.field, *c.domain, double_spec(c), k, exec)};
            case Experiment::maxwell_suite: return maxwell_suite(*c.field, *c.domain, probes, c.quadrature, opts);
        }
        return {};
    });
    report.pass = !report.checks.empty();
    for (const auto& r : report.checks) report.pass = report.pass && r.pass;
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

Json to_json(const RunReport& report, bool include_timing) {
    Json j;
    j["tool"] = "s3bs";
    j["version"] = tool_version();
    j["schema_version"] = kSchemaVersion;
    j["experiment"] = to_string(report.experiment);
    j["pass"] = report.pass;
    if (include_timing) j["wall_time_s"] = report.wall_time_s;
    Json checks = Json::array();
    for (const auto& r : report.checks) {
        Json cj;
        cj["name"] = r.name;
        cj["pass"] = r.pass;
        cj["scale"] = r.scale;
        cj["max_residual"] = r.max_residual;
        if (r.probes.empty()) {
            cj["error_bound"] = r.error_bound;
            cj["tolerance"] = r.tolerance;
        }
        if (!r.metrics.empty()) {
            Json m;
            for (const auto& [key, value] : r.metrics) m[key] = value;
            cj["metrics"] = m;
        }
        if (!r.note.empty()) cj["note"] = r.note;
        Json probes = Json::array();
        for (const auto& p : r.probes) {
            Json pj;
            pj["point"] = vec_json(p.probe.coords());
            pj["inside"] = p.inside;
            pj["value"] = vec_json(p.value);
            pj["expected"] = vec_json(p.expected);
            pj["residual"] = p.residual;
            pj["error_bound"] = p.error_bound;
            pj["tolerance"] = p.tolerance;
            pj["pass"] = p.pass;
            probes.push_back(pj);
        }
        cj["probes"] = probes;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    j["config"] = report.config;
    return j;
}

void write_csv(const RunReport& report, std::ostream& out) {
    out.precision(17);
    out << "check,probe,x0,x1,x2,x3,inside,residual,error_bound,tolerance,pass\n";
    for (const auto& r : report.checks) {
        if (r.probes.empty()) {
            out << r.name << ",,,,,,," << r.max_residual << ',' << r.error_bound << ',' << r.tolerance << ','
                << (r.pass ? 1 : 0) << '\n';
            continue;
        }
        for (std::size_t i = 0; i < r.probes.size(); ++i) {
            const auto& p = r.probes[i];
            out << r.name << ',' << i;
            for (std::size_t k = 0; k < 4; ++k) out << ',' << p.probe[k];
            out << ',' << (p.inside ? 1 : 0) << ',' << p.residual << ',' << p.error_bound << ',' << p.tolerance << ','
                << (p.pass ? 1 : 0) << '\n';
        }
    }
}

}  // namespace s3bs::cli
