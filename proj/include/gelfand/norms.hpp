#pragma once

#include <span>
#include <vector>

#include "gelfand/geometry.hpp"
#include "gelfand/mesh.hpp"
#include "gelfand/nonlinearity.hpp"

namespace gelfand {

/// Area of the unit sphere S^{n-1}: omega_{n-1} = 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// Weighted L^p norm over the geodesic ball with midpoint quadrature:
/// (omega_{n-1} sum_i |u_i|^p psi(r_i)^{n-1} h)^{1/p}.  p = infinity gives
/// max |u_i|.  Requires p >= 1.
double weighted_lp_norm(const RiemannianModel& model, const RadialMesh& mesh,
                        std::span<const double> u, double p);

/// Gradient at the nodes by centered differences; reflection ghost at the
/// origin (radial functions are even in r) and Dirichlet ghost at R.
std::vector<double> radial_gradient(const RadialMesh& mesh, std::span<const double> u);

/// L^p norm of the centered-difference gradient with the volume weight.
double weighted_w1p_seminorm(const RiemannianModel& model, const RadialMesh& mesh,
                             std::span<const double> u, double p);

/// Full norm (|u|_p^p + |grad u|_p^p)^{1/p}; reported alongside the
/// seminorm since W^{1,p} conventions differ.
double weighted_w1p_norm(const RiemannianModel& model, const RadialMesh& mesh,
                         std::span<const double> u, double p);

/// Max over the polynomial test family xi_k(r) = (1-(r/R)^2)^k,
/// k = 2..test_family_size+1, of
///   | -int u Lap_g xi dv + lambda int f(u) xi dv | / ||xi||_{L^1}.
/// Lap_g xi is evaluated analytically by default; with
/// analytic_laplacian = false the discrete operator is applied to xi
/// instead, which makes the residual of a discrete solution collapse to the
/// solver tolerance (Galerkin orthogonality through w-symmetry).
double weak_residual(const RiemannianModel& model, const RadialMesh& mesh,
                     std::span<const double> u, double lambda, const Nonlinearity& nl,
                     int test_family_size, bool analytic_laplacian = true);

} // namespace gelfand
