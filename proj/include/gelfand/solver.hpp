#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gelfand/mesh.hpp"
#include "gelfand/nonlinearity.hpp"
#include "gelfand/norms.hpp"

namespace gelfand {

/// One accepted point of the minimal-solution branch.  u is positive,
/// radially decreasing (within 1e-12 sup u), and pointwise above the
/// previous point on the branch.
struct BranchPoint {
  double lambda = 0;
  std::vector<double> u;
  double sup_u = 0;
  double l1_norm = 0;
  double lambda1 = std::numeric_limits<double>::quiet_NaN();
  int newton_iters = 0;
};

struct Branch {
  std::vector<BranchPoint> points; // strictly increasing lambda
  double lambda_star_estimate = 0;
  std::pair<double, double> fold_bracket{0, 0}; // (lambda_ok, lambda_fail)
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 30;
  double sup_guard = 500.0;
};

/// Damped Newton for A u = lambda f(u).  Converges when componentwise
/// |A u - lambda f(u)|_i <= tol (1 + lambda |f(u_i)|) + 64 eps (|A||u|)_i;
/// the trailing term is the roundoff floor of evaluating row i, which near
/// the origin exceeds any fixed tolerance once psi(r)^{n-1} spans many
/// orders of magnitude.  Step control is the natural monotonicity test
/// |J^{-1} F(u + t du)| < |du| with up to 30 halvings, bypassed for steps
/// already at noise level.
std::vector<double> newton_solve(const DiscreteOperator& op, const Nonlinearity& nl,
                                 double lambda, std::span<const double> u0,
                                 const NewtonOptions& opts, int* iters_out = nullptr);

std::vector<double> newton_solve(const RiemannianModel& model, const RadialMesh& mesh,
                                 const Nonlinearity& nl, double lambda,
                                 std::span<const double> u0, double tol = 1e-10,
                                 int max_iter = 30);

/// Picard iteration u <- A^{-1}(lambda f(u)) from u = 0; monotone
/// nondecreasing in the iteration index.  Serves as the minimality oracle:
/// the fixed point agrees with newton_solve to 10 tol.
std::vector<double> monotone_iteration(const RiemannianModel& model, const RadialMesh& mesh,
                                       const Nonlinearity& nl, double lambda, double tol,
                                       int max_iter = 200000);

struct ContinuationOptions {
  double lambda_step0 = -1; // < 0: default 0.05 n
  double newton_tol = 1e-10;
  int newton_max_iter = 30;
  double eig_tol = 1e-10;
  bool compute_lambda1 = true;
  int fold_bisection_iters = 40;
  bool fold_polish = true; // height-indexed polish toward the fold
  int max_points = 20000;
};

/// Traces the minimal branch from (lambda, u) = (0, 0) to the fold.
/// Natural continuation (previous solution as predictor) with adaptive step
/// and relative step floor 1e-8; then bisection refinement of the bracket
/// (Euler tangent predictor); then, when fold_polish is set, a short
/// continuation in the height u(r_0) with lambda free, which walks the
/// nearly lambda-vertical tail that no lambda step can parameterize and
/// stops strictly on the semistable side (lambda1 >= -1e-8).
/// lambda_star_estimate is the midpoint of the final bracket.
Branch continue_branch(const RiemannianModel& model, const RadialMesh& mesh,
                       const Nonlinearity& nl, const ContinuationOptions& opts = {});

/// Bordered Newton for A u = lambda f(u) with the height u(r_0) pinned to M
/// and lambda free.  Parameterizes the branch where lambda cannot (the
/// near-vertical fold tail).  Returns false when no nearby point exists.
bool solve_at_height(const DiscreteOperator& op, const Nonlinearity& nl,
                     std::vector<double>& u, double& lambda, double M, double tol,
                     double sup_guard);

/// CSV schema: header lambda,sup_u,l1_norm,lambda1,newton_iters; one row per
/// accepted point; trailing comment line `# lambda_star_estimate=<value>`.
void write_branch_csv(const Branch& branch, std::ostream& os);
std::string branch_csv(const Branch& branch);

struct BranchCsvRow {
  double lambda, sup_u, l1_norm, lambda1;
  int newton_iters;
};
struct BranchCsv {
  std::vector<BranchCsvRow> rows;
  double lambda_star_estimate = std::numeric_limits<double>::quiet_NaN();
};
BranchCsv parse_branch_csv(std::istream& is);

} // namespace gelfand
