#pragma once

// Residual checks of the identities satisfied by the Biot-Savart operator.
// Every report records the residual, the estimated numerical error and the
// tolerance it was judged against.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "s3bs/biot_savart.hpp"
#include "s3bs/potentials.hpp"

namespace s3bs {

struct ProbeResult {
    Point probe;
    bool inside = false;
    Vec4 value;
    Vec4 expected;
    double residual = 0.0;
    double error_bound = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct IdentityReport {
    std::string name;
    std::vector<ProbeResult> probes;
    /// Magnitude that relative tolerances refer to.
    double scale = 0.0;
    double max_residual = 0.0;
    /// Used by checks without probes; per-probe values live in `probes`.
    double error_bound = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::vector<std::pair<std::string, double>> metrics;
    std::string note;

    /// Sets per-probe pass flags, max_residual and pass. Without probes,
    /// pass is max_residual <= tolerance.
    void finalize();
};

struct CheckOptions {
    BSMethod method = BSMethod::parallel_transport;
    /// Step for derivatives on a moving template (curl of BS, Laplacians of
    /// volume potentials).
    FDScheme fd = kIntegralFD;
    /// Step for derivatives at fixed nodes (divergence of BS).
    FDScheme kernel_fd = kKernelFD;
    /// Relative tolerance; each check has its own default.
    std::optional<double> rel_tol;
    Exec exec;
};

/// curl BS(V) - 1_Omega V - dE_rho/dt - dE_sigma/dt at each probe, judged
/// against rel_tol * sup|V| (default 5%). Probes must keep 2 (h + eps) from
/// the boundary.
IdentityReport verify_curl_bs(const VectorField& v, const Domain& omega, const std::vector<Point>& probes,
                              const QuadratureSpec& spec, const CheckOptions& opts = {});

/// div BS(V) at each probe, judged against rel_tol * max|BS(V)| over the
/// probe stencils (default 1%).
IdentityReport verify_div_bs(const VectorField& v, const Domain& omega, const std::vector<Point>& probes,
                             const QuadratureSpec& spec, const CheckOptions& opts = {});

/// Residual norm of
///   curl_y {P_yx v x grad_y phi} - grad_y {v . grad_x(phi cos a)} - (Lap phi - phi)(v - (v.y) y)
/// for a radial potential, with derivatives in y by finite differences and
/// closed-form derivatives in alpha. Throws DegeneratePair unless
/// 0.1 < alpha(x, y) < 3.
double key_lemma_residual(const Point& x, const Point& y, const TangentVector& v,
                          const FDScheme& fd = {1e-3, true}, Potential kind = Potential::phi);

/// Residual norm of curl_y [x, v, y] = 2 (x.y) v - 2 (v.y) x.
double claim_residual(const Point& x, const Point& y, const TangentVector& v, const FDScheme& fd = {1e-3, true});

/// int_Omega L_*(curl V) + 2 L_*V dx + oint L_*(V x n) dA = 0 at each
/// transport target, volume and boundary sides from independent samples;
/// judged against k_bounds times the summed error bounds.
IdentityReport integral_identity_vxn(const VectorField& v, const Domain& omega, const std::vector<Point>& targets,
                                     const QuadratureSpec& spec, double k_bounds = 3.0, const Exec& exec = {});

/// |<BS(V), W> - <V, BS(W)>| judged against k_bounds times its error bound.
IdentityReport self_adjointness_check(const VectorField& v, const VectorField& w, const Domain& omega,
                                      const DoubleSpec& spec, double k_bounds = 3.0, const CheckOptions& opts = {});

/// |BS(grad f)| at the probes against rel_tol * sup|grad f| (default 3%). Throws WrongClass
/// unless grad f is a harmonic or grounded gradient on the domain.
IdentityReport kernel_check(const ScalarField& f, const Domain& omega, const std::vector<Point>& probes,
                            const QuadratureSpec& spec, const CheckOptions& opts = {});

/// int_{S^3} |E_sigma|^2 <= int_Omega |V|^2, passing when it holds within
/// k_bounds times the combined error. The margin and whether it exceeds that
/// error (a strict gap) are reported as metrics. Throws WrongClass if div V != 0.
IdentityReport energy_inequality_check(const VectorField& v, const Domain& omega, const DoubleSpec& spec,
                                       double k_bounds = 3.0, const Exec& exec = {});

/// |BS_parallel - BS_left| at each probe against the summed error bounds.
IdentityReport method_agreement(const VectorField& v, const Domain& omega, const std::vector<Point>& probes,
                                const QuadratureSpec& spec, const Exec& exec = {});

/// The four Maxwell equations at probes inside the domain:
///   1. div E = rho          (div dE/dt = -div V)
///   2. curl E = dB/dt = 0
///   3. div B = 0
///   4. curl B = V + dE/dt
std::vector<IdentityReport> maxwell_suite(const VectorField& v, const Domain& omega, const std::vector<Point>& probes,
                                          const QuadratureSpec& spec, const CheckOptions& opts = {});

}  // namespace s3bs
