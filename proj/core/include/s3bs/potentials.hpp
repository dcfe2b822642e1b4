#pragma once

// Radial potentials on S^3 as functions of the geodesic distance alpha:
//
//   phi (a) = -(pi - a) csc(a) / (4 pi^2)   fundamental solution of (Laplacian - 1)
//   phi0(a) = -(pi - a) cot(a) / (4 pi^2)   fundamental solution of the Laplacian
//   phi1(a) = -a (2 pi - a) / (16 pi^2)     Laplacian(phi1) = phi0 - [phi0]
//
// Derivatives are closed-form.

namespace s3bs {

enum class Potential { phi, phi0, phi1 };

/// Value (order 0) or alpha-derivative (order 1, 2) of a radial potential.
/// Throws DomainError outside (0, pi) for phi and phi0, and for order > 2.
double eval_potential(Potential kind, double alpha, int order = 0);

/// f'' + 2 f' cot(alpha), the S^3 Laplacian of a radial function.
double laplacian_radial(Potential kind, double alpha);

/// Average of phi0 over S^3, computed once by Gauss-Legendre quadrature.
double phi0_average();


}  // namespace s3bs
