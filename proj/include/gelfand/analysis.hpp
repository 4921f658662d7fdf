#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gelfand/geometry.hpp"
#include "gelfand/nonlinearity.hpp"
#include "gelfand/solver.hpp"

namespace gelfand {

struct RegularityExponents {
  double p0 = 0;  // +inf when n - 2 sqrt(n-1) - 4 <= 0
  double p1 = 0;  // +inf when n - 2 sqrt(n-1) - 2 <= 0
  double n_m = std::numeric_limits<double>::quiet_NaN(); // N(m), when m given
};

/// p0 = 2n/(n - 2 sqrt(n-1) - 4), p1 = 2n/(n - 2 sqrt(n-1) - 2), and the
/// dimension threshold N(m) = 2 + 4m/(m-1) + 4 sqrt(m/(m-1)).
RegularityExponents regularity_exponents(int n, std::optional<double> m = std::nullopt);

struct ClosedFormExtremal {
  double lambda_star = 0;
  std::function<double(double)> u_star;
  NonlinearityKind family = NonlinearityKind::ExpModel; // exp or power family
  double theta = 0;                                     // 2/(m-1) for the power family
};

/// Exponential family: lambda* = 2(n-2), u* = -2 log(psi/psi(R)), for
/// n >= 10.  Power family: lambda* = (2/(m-1))(n - 2m/(m-1)),
/// u* = psi^{-2/(m-1)} - psi(R)^{-2/(m-1)}, for n >= N(m).  Elliptic models
/// additionally need R < min(R0, Re) resp. R < min(R0, Rp).  Violated
/// hypotheses raise HypothesisError naming the condition.
ClosedFormExtremal closed_form_extremal(const RiemannianModel& model,
                                        NonlinearityKind family,
                                        std::optional<double> m = std::nullopt);

/// -Lap_g u* - lambda* f(u*) at radius r, with the derivatives of u*
/// expanded analytically in psi, psi', psi''.  Vanishes identically on the
/// space forms where the closed forms hold.
double extremal_strong_residual(const RiemannianModel& model, const ClosedFormExtremal& cf,
                                const Nonlinearity& nl, double r);

struct ExtremalReport {
  double lambda_star_numeric = 0;
  double lambda_star_closed = 0;
  double max_pointwise_gap = 0;            // on r in [R/4, R], finest mesh
  double weak_residual_of_closed_form = 0; // finest mesh
  RegularityExponents exponents;
  // per-mesh diagnostics (not part of the serialized schema)
  std::vector<int> ladder;
  std::vector<double> lambda_star_ladder;
  std::vector<double> gap_ladder;
  std::vector<double> weak_residual_ladder;
};

/// JSON with exactly the report fields; infinities as the literal "inf".
std::string to_json(const ExtremalReport& report);

/// Carries the filled report out of a failed verification.
class ReportFailure : public std::runtime_error {
public:
  ReportFailure(const std::string& msg, ExtremalReport rep)
      : std::runtime_error(msg), report(std::move(rep)) {}
  ExtremalReport report;
};

inline ContinuationOptions make_verify_options() {
  ContinuationOptions o;
  o.compute_lambda1 = false;
  return o;
}

/// Runs continue_branch over the mesh ladder, compares the finest
/// lambda_star_estimate against the closed form (2% bound; ReportFailure on
/// violation carries the report), and samples the closed-form u* on each
/// mesh for the weak-residual ladder.  jobs > 1 runs ladder meshes in
/// parallel (results are joined in ladder order, so output is independent
/// of scheduling).
ExtremalReport verify_extremal(const RiemannianModel& model, const Nonlinearity& nl,
                               std::span<const int> mesh_ladder,
                               const ContinuationOptions& opts = make_verify_options(),
                               int jobs = 1);

struct HardyReport {
  double h_constant = 0;
  double worst_margin = 0;          // min over trials of LHS - RHS
  double worst_margin_rel = 0;      // same, normalized by LHS
  double worst_poincare_margin = 0; // Poincare step on xi psi^{n/2-1}
  double worst_poincare_rel = 0;
  int trials = 0;
};

/// Tests the improved weighted Hardy inequality on `trials` random
/// piecewise-linear radial functions (16 knots, plateau near 0, xi(R) = 0)
/// with midpoint quadrature on an N-point mesh, and the Poincare step on the
/// transformed functions.  Requires n >= 3 and psi in {sinh, sin}; elliptic
/// models need R < R0 (HypothesisError otherwise).
HardyReport hardy_verify(const RiemannianModel& model, int trials,
                         unsigned long long seed = 0, int mesh_points = 2048);

/// Margins of one explicit test function (exposed for the edge cases).
std::pair<double, double> hardy_margin(const RiemannianModel& model, const RadialMesh& mesh,
                                       std::span<const double> xi);

struct PowerStabilityConditions {
  bool cond1 = false; // (n-2)^2/4 >= lambda# m   (equivalent to n >= N(m))
  bool cond2 = false; // H_{n,psi} >= -(2/(m-1)^2)((m-1)n-(m+1)) K
  double lhs1 = 0, rhs1 = 0, lhs2 = 0, rhs2 = 0;
};

PowerStabilityConditions power_semistability_conditions(const RiemannianModel& model, double m);

struct MembershipRow {
  double p = 0;
  double lp_norm = 0;      // finest mesh
  double lp_slope = 0;     // d log(norm) / d log(1/h) across the ladder
  bool lp_member = false;  // |slope| below the classification threshold
  double w1p_seminorm = 0;
  double w1p_slope = 0;
  bool w1p_member = false;
};

inline constexpr double kMembershipSlopeThreshold = 0.04;

/// Weighted L^p norms and W^{1,p} seminorms of u* sampled across the mesh
/// ladder; a log-log slope near zero classifies membership, a slope bounded
/// away from zero classifies divergence.
std::vector<MembershipRow> lp_membership_scan(const RiemannianModel& model,
                                              const std::function<double(double)>& u_star,
                                              std::span<const double> p_grid,
                                              std::span<const int> mesh_ladder);

/// Geometric grid of `count` points from lo_factor*boundary to
/// hi_factor*boundary (the scan default: 9 points, 0.5x..2x).
std::vector<double> membership_p_grid(double boundary, int count = 9,
                                      double lo_factor = 0.5, double hi_factor = 2.0);

} // namespace gelfand
