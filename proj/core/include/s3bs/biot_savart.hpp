#pragma once

// The Biot-Savart operator on a subdomain of S^3 and the electrostatic
// correction fields that appear in its curl.
//
//   parallel form:  BS(V)(y) = int_Omega P_yx V(x) x grad_y phi dx
//   left form:      BS(V)(y) = int_Omega L_*V x grad_y phi0 dx
//                              - 1/(4 pi^2) int_Omega L_*V dx
//                              + 2 grad_y int_Omega L_*V . grad_y phi1 dx
//
// with L_* the differential of left multiplication by y x^{-1}. Both are
// integrated on the polar template around y; the outer gradient of the left
// form is a frame finite difference taken node by node.

#include <cstddef>
#include <string>

#include "s3bs/calculus.hpp"
#include "s3bs/domains.hpp"
#include "s3bs/fields.hpp"
#include "s3bs/quadrature.hpp"

namespace s3bs {

enum class BSMethod { parallel_transport, left_translation };

std::string to_string(BSMethod m);
BSMethod bs_method_from_string(const std::string& name);

/// Step for derivatives of integrals whose template moves with the
/// evaluation point (curl and divergence of BS, Laplacians of potentials):
/// large enough that nodes crossing the boundary between stencil points do
/// not dominate the estimate.
inline constexpr FDScheme kIntegralFD{1e-2, false};

/// Step for derivatives taken at fixed nodes (outer gradients of potential
/// integrals). Must stay well below the excision radius so no stencil
/// straddles the kernel singularity.
inline constexpr FDScheme kKernelFD{1e-3, false};

struct BSOptions {
    BSMethod method = BSMethod::parallel_transport;
    /// Step for the outer gradient of the left form.
    FDScheme outer_fd = kKernelFD;
};

struct BSResult {
    TangentVector value;
    /// Statistical or grid error of the total plus the excision budget.
    double error_bound = 0.0;
    BSMethod method = BSMethod::parallel_transport;
    /// For the parallel form only kernel_term is populated.
    VectorEstimate kernel_term;
    VectorEstimate average_term;
    VectorEstimate gradient_term;
    /// [V] = (1/(2 pi^2)) int_Omega L_*V dx.
    VectorEstimate average;
    std::size_t n_used = 0;
};

/// Largest |V| and |div V| over a fixed sample of the domain and its boundary.
struct FieldScale {
    double sup_v = 0.0;
    double sup_div = 0.0;
};
FieldScale field_scale(const VectorField& v, const Domain& omega);

/// Reusable evaluator: holds the polar template so repeated evaluations
/// (probes, stencils, outer quadrature nodes) share samples.
class BiotSavart {
public:
    BiotSavart(VectorField v, Domain omega, const QuadratureSpec& spec, BSOptions options = {},
               const Exec& exec = {});

    BSResult evaluate(const Point& y) const;

    /// Finite-difference curl of BS(V) at y, differenced node by node on the
    /// template moving with each stencil point so the point-source term
    /// V(y) is retained.
    VectorEstimate curl(const Point& y, const FDScheme& fd) const;
    /// Finite-difference divergence of BS(V) at y, differenced at fixed
    /// nodes (the kernel has no point-source divergence). fd.h must stay well
    /// below the excision radius.
    ScalarEstimate divergence(const Point& y, const FDScheme& fd) const;
    /// Mean of BS(V) over the divergence stencil; used as the magnitude scale.
    Vec4 stencil_mean(const Point& y, const FDScheme& fd) const;

    /// Unweighted contribution of one template node to BS(V)(y).
    Vec4 integrand(const Vec4& y, const PolarNode& node) const;
    /// Unweighted integrand for the pair (y, x) with the field value vx at x
    /// supplied by the caller; x is assumed to lie in the domain. Being
    /// linear in vx, it can be applied to other fields on the same nodes.
    Vec4 kernel_at(const Vec4& y, const Vec4& x, const Vec4& vx) const { return total(parts_at(y, x, vx)); }

    /// Excision budget excision_radius * sup|V|.
    double excision_budget() const { return spec_.excision_radius * scale_.sup_v; }

    const PolarNodes& nodes() const { return nodes_; }
    const VectorField& field() const { return v_; }
    const Domain& domain() const { return omega_; }
    const QuadratureSpec& spec() const { return spec_; }
    const BSOptions& options() const { return options_; }
    const FieldScale& scale() const { return scale_; }

private:
    struct Parts {
        Vec4 kernel;
        Vec4 average;   // L_*V, unscaled
        Vec4 gradient;  // 2 grad_y of the phi1 term at fixed x
    };
    Parts parts_at(const Vec4& y, const Vec4& x, const Vec4& vx) const;
    Parts parts(const Vec4& y, const PolarNode& node) const;
    Vec4 total(const Parts& p) const;
    bool inside(const Vec4& x) const;

    VectorField v_;
    Domain omega_;
    QuadratureSpec spec_;
    BSOptions options_;
    Exec exec_;
    PolarNodes nodes_;
    FieldScale scale_;
    bool full_sphere_ = false;
};

BSResult bs_evaluate(const VectorField& v, const Domain& omega, const Point& y, BSMethod method,
                     const QuadratureSpec& spec, const Exec& exec = {});

enum class Charge { rho, sigma };

/// dE_rho/dt = -grad_y int_Omega phi0 div V dx, or
/// dE_sigma/dt = grad_y oint phi0 V.n dA (zero on the full sphere).
/// The gradient is differenced at fixed quadrature nodes.
VectorEstimate electrostatic_field(const VectorField& v, const Domain& omega, const Point& y, Charge which,
                                   const QuadratureSpec& spec, const FDScheme& fd = kKernelFD,
                                   const Exec& exec = {});

/// Laplacian in y of the potential whose gradient electrostatic_field returns
/// (i.e. the divergence of that field). Volume potentials use the template
/// moving with y so the point-source term is retained.
ScalarEstimate electrostatic_divergence(const VectorField& v, const Domain& omega, const Point& y,
                                        Charge which, const QuadratureSpec& spec,
                                        const FDScheme& fd = kIntegralFD, const Exec& exec = {});

/// FD curl of electrostatic_field at y; zero up to truncation error.
VectorEstimate electrostatic_curl(const VectorField& v, const Domain& omega, const Point& y, Charge which,
                                  const QuadratureSpec& spec, const FDScheme& fd = kKernelFD,
                                  const Exec& exec = {});

/// int_Omega V . W dx.
ScalarEstimate inner_product(const VectorField& v, const VectorField& w, const Domain& omega,
                             const QuadratureSpec& spec, const Exec& exec = {});

/// Double quadrature with outer nodes on the domain and a shared inner polar
/// template. The error combines the outer Monte Carlo (or grid) error with an
/// inner error from independent template slices (or the coarse template).
struct DoubleSpec {
    QuadratureSpec outer;
    QuadratureSpec inner;
    /// Number of independent inner slices used for the inner error.
    std::size_t inner_groups = 16;
};

/// <V, BS(V)> over the domain.
ScalarEstimate helicity(const VectorField& v, const Domain& omega, const DoubleSpec& spec,
                        BSMethod method = BSMethod::parallel_transport, const Exec& exec = {});

/// <BS(V), W> - <V, BS(W)> on shared nodes, plus both pairings.
struct AdjointEstimate {
    ScalarEstimate difference;
    ScalarEstimate bs_v_w;
    ScalarEstimate v_bs_w;
};
AdjointEstimate adjoint_pairings(const VectorField& v, const VectorField& w, const Domain& omega,
                                 const DoubleSpec& spec, BSMethod method = BSMethod::parallel_transport,
                                 const Exec& exec = {});

/// Energies of the inequality int_{S^3} |E_sigma|^2 <= int_Omega |V|^2 for a
/// divergence-free V. The left side is evaluated through Green's identity,
/// int |grad u|^2 = -oint u sigma dA with u = oint phi0 sigma, and u on the
/// boundary is computed as the volume integral int_Omega grad_x phi0 . V dx.
struct EnergyEstimate {
    ScalarEstimate surface_energy;
    ScalarEstimate current_energy;
};
EnergyEstimate electrostatic_energy(const VectorField& v, const Domain& omega, const DoubleSpec& spec,
                                   const Exec& exec = {});

}  // namespace s3bs
