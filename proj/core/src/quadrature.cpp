#include "s3bs/quadrature.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "s3bs/errors.hpp"
#include "s3bs/gauss.hpp"
#include "s3bs/random.hpp"

namespace s3bs {
namespace {

double weight_of(const WeightedPoint& n) { return n.weight; }
double weight_of(const BoundarySample& n) { return n.area_weight; }
double weight_of(const PolarNode& n) { return n.weight; }

Vec4 location_of(const WeightedPoint& n) { return n.point.coords(); }
Vec4 location_of(const BoundarySample& n) { return n.point.coords(); }
Vec4 location_of(const PolarNode& n) { return n.z(); }

// Per-batch partial sums of w f and (w f)^2 for every component.
struct Partial {
    std::vector<double> sum;
    std::vector<double> sum_sq;
};

template <class Node>
std::vector<double> reduce(const std::vector<Node>& nodes, std::size_t k, const NodeKernel<Node>& f,
                           std::size_t batch_size, const Exec& exec, std::vector<double>* sum_sq) {
    const std::size_t n = nodes.size();
    const auto nb = static_cast<long>((n + batch_size - 1) / batch_size);
    std::vector<Partial> partials(static_cast<std::size_t>(nb));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(nb));

#pragma omp parallel for schedule(dynamic, 1) num_threads(exec.workers)
    for (long b = 0; b < nb; ++b) {
        auto& part = partials[static_cast<std::size_t>(b)];
        part.sum.assign(k, 0.0);
        part.sum_sq.assign(k, 0.0);
        std::vector<double> out(k);
        try {
            const std::size_t begin = static_cast<std::size_t>(b) * batch_size;
            const std::size_t end = std::min(n, begin + batch_size);
            for (std::size_t i = begin; i < end; ++i) {
                const Node& node = nodes[i];
                std::fill(out.begin(), out.end(), 0.0);
                f(node, out.data());
                const double w = weight_of(node);
                for (std::size_t c = 0; c < k; ++c) {
                    if (!std::isfinite(out[c])) {
                        const Vec4 p = location_of(node);
                        std::ostringstream os;
                        os.precision(17);
                        os << "non-finite integrand component " << c << " at node " << i << " ("
                           << p[0] << ", " << p[1] << ", " << p[2] << ", " << p[3] << ")";
                        throw NonFiniteIntegrand(os.str());
                    }
                    const double t = w * out[c];
                    part.sum[c] += t;
                    part.sum_sq[c] += t * t;
                }
            }
        } catch (...) {
            failures[static_cast<std::size_t>(b)] = std::current_exception();
        }
    }
    for (const auto& e : failures) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<double> total(k, 0.0);
    if (sum_sq) sum_sq->assign(k, 0.0);
    for (const auto& part : partials) {
        for (std::size_t c = 0; c < k; ++c) {
            total[c] += part.sum[c];
            if (sum_sq) (*sum_sq)[c] += part.sum_sq[c];
        }
    }
    return total;
}

}  // namespace

double Accumulation::error_norm(std::size_t first, std::size_t count) const {
    double s = 0.0;
    for (std::size_t i = first; i < first + count; ++i) s += error[i] * error[i];
    return std::sqrt(s);
}

template <class Node>
Accumulation accumulate(const NodeSet<Node>& nodes, std::size_t components, const NodeKernel<Node>& f,
                        std::size_t batch_size, const Exec& exec) {
    if (batch_size == 0) throw InvalidSpec("batch_size must be at least 1");
    Accumulation acc;
    acc.n_used = nodes.nodes.size();
    if (nodes.backend == Backend::monte_carlo) {
        std::vector<double> sum_sq;
        acc.value = reduce(nodes.nodes, components, f, batch_size, exec, &sum_sq);
        // With equal weights w = V / N, t_i = N w f_i are iid with mean equal to the integral.
        const auto n = static_cast<double>(nodes.nodes.size());
        acc.error.resize(components);
        for (std::size_t c = 0; c < components; ++c) {
            const double mean = acc.value[c];
            const double var = n > 1.0 ? std::max(0.0, (n * n * sum_sq[c] - n * mean * mean) / (n - 1.0)) : 0.0;
            acc.error[c] = std::sqrt(var / n);
        }
        return acc;
    }
    acc.value = reduce(nodes.nodes, components, f, batch_size, exec, nullptr);
    const std::vector<double> coarse = reduce(nodes.coarse, components, f, batch_size, exec, nullptr);
    acc.error.resize(components);
    for (std::size_t c = 0; c < components; ++c) acc.error[c] = std::abs(acc.value[c] - coarse[c]);
    return acc;
}

template Accumulation accumulate(const NodeSet<WeightedPoint>&, std::size_t, const NodeKernel<WeightedPoint>&,
                                 std::size_t, const Exec&);
template Accumulation accumulate(const NodeSet<BoundarySample>&, std::size_t,
                                 const NodeKernel<BoundarySample>&, std::size_t, const Exec&);
template Accumulation accumulate(const NodeSet<PolarNode>&, std::size_t, const NodeKernel<PolarNode>&,
                                 std::size_t, const Exec&);

namespace {

PolarNode make_polar(double alpha, const Vec4& omega, double weight) {
    PolarNode p;
    p.omega = omega;
    p.alpha = alpha;
    p.sin_a = std::sin(alpha);
    p.cos_a = std::cos(alpha);
    p.weight = weight * p.sin_a * p.sin_a;
    return p;
}

void polar_grid(std::size_t m, double eps, std::vector<PolarNode>& out) {
    const GaussRule ar = gauss_legendre(m, eps, kPi);
    const GaussRule zr = gauss_legendre(m, -1.0, 1.0);
    const std::size_t np = 2 * m;
    out.reserve(m * m * np);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double z = zr.nodes[j];
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            for (std::size_t k = 0; k < np; ++k) {
                const double ph = 2.0 * kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(np);
                out.push_back(make_polar(ar.nodes[i], {0.0, rho * std::cos(ph), rho * std::sin(ph), z},
                                         ar.weights[i] * zr.weights[j] * 2.0 * kPi / static_cast<double>(np)));
            }
        }
    }
}

}  // namespace

PolarNodes polar_template(const QuadratureSpec& spec, const Exec& exec) {
    spec.validate();
    const double eps = spec.excision_radius;
    PolarNodes out;
    out.backend = spec.backend;
    if (spec.backend == Backend::stratified_grid) {
        // Smallest m with 2 m^3 >= n_samples.
        const auto m = std::max<std::size_t>(
            4, static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(spec.n_samples) / 2.0) - 1e-9)));
        polar_grid(m, eps, out.nodes);
        polar_grid(std::max<std::size_t>(2, m / 2), eps, out.coarse);
        return out;
    }
    const std::size_t n = spec.n_samples;
    const double w = (kPi - eps) * 4.0 * kPi / static_cast<double>(n);
    out.nodes.resize(n);
    const std::size_t bs = spec.batch_size;
    const auto nb = static_cast<long>((n + bs - 1) / bs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(exec.workers)
    for (long b = 0; b < nb; ++b) {
        SubStream rng(spec.seed, StreamTag::polar, static_cast<std::uint64_t>(b));
        const std::size_t end = std::min(n, (static_cast<std::size_t>(b) + 1) * bs);
        for (std::size_t i = static_cast<std::size_t>(b) * bs; i < end; ++i) {
            const double alpha = rng.uniform(eps, kPi);
            out.nodes[i] = make_polar(alpha, rng.sphere_direction(), w);
        }
    }
    return out;
}

}  // namespace s3bs
