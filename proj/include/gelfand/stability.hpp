#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gelfand/mesh.hpp"
#include "gelfand/nonlinearity.hpp"

namespace gelfand {

/// Principal eigenpair of the linearized operator.  phi1 is normalized to
/// unit weighted L^2 norm and sign-normalized positive; it has no sign
/// change.
struct EigenPair {
  double lambda1 = 0;
  std::vector<double> phi1;
};

/// Smallest eigenvalue of the w-weighted pencil (A - lambda diag(f'(u))).
/// The tridiagonal is similarity-symmetrized by D^{1/2} (D = diag w_i); the
/// eigenvalue is localized by Sturm-count bisection from the Gershgorin
/// bounds and the eigenvector recovered by shifted inverse power iteration,
/// converged when successive Rayleigh quotients differ by less than
/// eig_tol (1 + |lambda1|).
EigenPair principal_eigenvalue(const RiemannianModel& model, const RadialMesh& mesh,
                               const Nonlinearity& nl, double lambda,
                               std::span<const double> u, double eig_tol = 1e-10,
                               int max_iter = 10000);

/// Q_u(xi) = int_0^R psi^{n-1} { xi_r^2 - lambda f'(u) xi^2 } dr (radial
/// integral, no sphere factor).  xi_r at the faces by the flux stencil;
/// requires xi(R) = 0 (ghost value is taken as 0).
double quadratic_form(const RiemannianModel& model, const RadialMesh& mesh,
                      const Nonlinearity& nl, double lambda,
                      std::span<const double> u, std::span<const double> xi);

/// Lipschitz test function eta with eta(R) = 0, given with its derivative.
struct EtaFunction {
  std::function<double(double)> eta;
  std::function<double(double)> eta_prime;
};

/// (1 - r/R)^k for k = 1..4 plus a truncated psi^{-1} profile supported in
/// [0, delta_psi(model)].
std::vector<EtaFunction> default_eta_family(const RiemannianModel& model);

/// Both sides of the inequality
///   (n-1) int psi^{n-1} u_r^2 (psi')^2 eta^2
///     <= int psi^{n-1} u_r^2 { (psi eta)_r^2 + (n-1) psi psi'' eta^2 },
/// one (lhs, rhs) pair per eta.
std::vector<std::pair<double, double>>
etapsi_check(const RiemannianModel& model, const RadialMesh& mesh,
             std::span<const double> u, const std::vector<EtaFunction>& family);

/// [ int_0^delta u_r^2 psi^{n-1-2 alpha} dr ] / ||u||_{L^1}^2 with delta from
/// delta_psi.  Requires 1 <= alpha < 1 + sqrt(n-1).
double key_estimate_ratio(const RiemannianModel& model, const RadialMesh& mesh,
                          std::span<const double> u, double alpha);

} // namespace gelfand
