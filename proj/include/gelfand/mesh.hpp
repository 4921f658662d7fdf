#pragma once

#include <span>
#include <vector>

#include "gelfand/geometry.hpp"

namespace gelfand {

/// Cell-centered radial mesh on (0,R): h = R/(N+1/2), interior nodes
/// r_i = (i+1/2) h, faces at k h for k = 0..N.  No node sits at the
/// degenerate origin; the Dirichlet ghost node lies exactly at r = R.
struct RadialMesh {
  int n_points = 0;   // N
  double radius = 0;  // R
  double h = 0;       // R / (N + 1/2)
  std::vector<double> nodes;

  static RadialMesh uniform(double R, int N);

  double node(int i) const { return nodes[static_cast<size_t>(i)]; }
  double face(int k) const { return static_cast<double>(k) * h; }
  double ghost() const { return radius; } // r_N, where u = 0
};

/// Flux-form tridiagonal discretization of u -> -(psi^{n-1} u_r)_r / psi^{n-1}
/// with zero flux through r = 0 (psi(0) = 0) and Dirichlet ghost u(R) = 0.
/// Row i:  sub_i u_{i-1} + diag_i u_i + super_i u_{i+1}.
/// Symmetric in the w-weighted inner product: w_i super_i = w_{i+1} sub_{i+1}.
struct DiscreteOperator {
  int n_points = 0;
  double h = 0;
  std::vector<double> sub, diag, super;
  std::vector<double> weight;      // w_i = psi(r_i)^{n-1}
  std::vector<double> face_weight; // psi(k h)^{n-1}, k = 0..N (index 0 is 0)

  /// out = A u  (ghost values u_{-1}, u_N treated as 0)
  void apply(std::span<const double> u, std::span<double> out) const;

  /// out_i = |sub_i||u_{i-1}| + diag_i |u_i| + |super_i||u_{i+1}|, the
  /// componentwise roundoff scale |A||u| used in residual tests.
  void apply_abs(std::span<const double> u, std::span<double> out) const;
};

DiscreteOperator assemble_laplacian(const RiemannianModel& model, const RadialMesh& mesh);

/// Tridiagonal LU with partial pivoting engaged only when a subdiagonal
/// entry dominates the running pivot (plain Thomas otherwise).  Factors
/// once, then solves for any number of right-hand sides.
class TridiagonalSolver {
public:
  /// Throws SingularJacobian when a pivot falls below 1e-14 * row scale.
  void factor(std::span<const double> sub, std::span<const double> diag,
              std::span<const double> super);

  void solve(std::span<const double> rhs, std::span<double> x) const;

  int size() const { return n_; }

private:
  int n_ = 0;
  std::vector<double> piv_, up1_, up2_, mult_;
  std::vector<char> swapped_;
};

} // namespace gelfand
