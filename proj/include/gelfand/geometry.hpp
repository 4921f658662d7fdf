#pragma once

#include <functional>
#include <optional>
#include <string>

namespace gelfand {

enum class SpaceForm { Euclidean, Hyperbolic, Elliptic, Custom };

std::string to_string(SpaceForm kind);

/// Riemannian model (M,g) with metric dr^2 + psi(r)^2 dTheta^2 on the
/// geodesic ball of radius R around the pole.  The warping function psi
/// satisfies psi(0) = psi''(0) = 0 and psi'(0) = 1; for the three space
/// forms psi is sinh, the identity, or sin, with curvature sign
/// K = -1, 0, +1.  Immutable after construction; all members are pure.
struct RiemannianModel {
  int dim = 0;       // n >= 2
  double radius = 0; // R > 0
  SpaceForm kind = SpaceForm::Custom;
  std::function<double(double)> psi;
  std::function<double(double)> psi_prime;
  std::function<double(double)> psi_second;
  std::optional<int> curvature; // K in {-1,0,+1}; unset for Custom

  double psi_at(double r) const { return psi(r); }
  bool is_space_form() const { return curvature.has_value(); }
};

/// Builds one of the three constant-curvature models.
/// Requires n >= 2, R > 0, and R < pi for the elliptic space (the weight
/// sin(r)^{n-1} must stay positive on (0,R]).
RiemannianModel make_space_form(SpaceForm kind, int n, double R);

/// Wraps user-supplied evaluators (psi, psi', psi'').  The structural
/// hypotheses are checked at r=0 within 1e-10 and psi > 0 is probed on a
/// grid of (0,R].  Tabulated data is not accepted; callers must provide
/// consistent derivative evaluators.
RiemannianModel make_custom_model(int n, double R,
                                  std::function<double(double)> psi,
                                  std::function<double(double)> psi_prime,
                                  std::function<double(double)> psi_second);

/// phi(r) = int_0^r psi(s) ds.  Closed forms for the space forms,
/// adaptive Simpson quadrature for Custom.
double phi(const RiemannianModel& model, double r);

/// sup over (0,R) of phi(r)/psi(r).  The ratio is increasing for the three
/// space forms, so the sup sits at r = R; Custom models are scanned densely
/// and polished by golden-section search (tolerance 1e-12).
double sup_phi_over_psi(const RiemannianModel& model);

/// Hardy constant H_{n,psi} = ((sup phi/psi)^{-2} - n(n-2) K) / 4.
/// Defined for n >= 3 on the space forms; the Euclidean value (K = 0) is an
/// extension beyond the sinh/sin statement and is flagged as such in docs.
double hardy_constant(const RiemannianModel& model);

struct CriticalRadii {
  double r0; // positivity radius of the Hardy constant, capped at pi/2
  double re; // exponential nonlinearity positivity radius
  double rp; // power nonlinearity positivity radius (uniform in m)
};

/// Elliptic radius thresholds; +infinity for the hyperbolic and Euclidean
/// models (no radius restriction).  r0 solves (1+cos s)/(1-cos s) = n(n-2).
CriticalRadii critical_radii(const RiemannianModel& model);

/// Largest delta <= 0.49 R with psi' > 0 on [0, delta].  For sin the value
/// is additionally capped just below pi/2.
double delta_psi(const RiemannianModel& model);

} // namespace gelfand
