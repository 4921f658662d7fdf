#pragma once

#include <functional>
#include <string>

#include "gelfand/geometry.hpp"

namespace gelfand {

enum class NonlinearityKind { ExpModel, PowerModel, GelfandClassic, PowerClassic, Custom };

std::string to_string(NonlinearityKind kind);

/// Reaction term f with derivative f'.  Instances are validated on
/// construction: f(0) > 0, f' >= 0 on a probe grid, and f(t)/t increasing
/// between the superlinearity probe points.  Immutable and pure.
struct Nonlinearity {
  NonlinearityKind kind = NonlinearityKind::Custom;
  double m = 0;              // power exponent, when applicable
  double psi_R = 1;          // captured psi(R)
  int curvature = 0;         // captured K
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  double overflow_guard = 700.0; // eval() refuses exp arguments above this
  double sup_guard = 500.0;      // continuation aborts an attempt above this
};

/// f_e(u) = e^u / psi(R)^2 - (n-1)/(n-2) K.  Requires n >= 3; on the
/// elliptic space additionally R < R_e so that f(0) > 0.
Nonlinearity make_exp_model(const RiemannianModel& model);

/// f_p(u) = (u+c)((u+c)^{m-1} - beta K) with c = psi(R)^{-2/(m-1)} and
/// beta = ((m-1)n-(m+1))/((m-1)n-2m).  Requires m > (n+2)/(n-2) unless
/// `allow_subcritical`; on the elliptic space additionally R < R_p.
Nonlinearity make_power_model(const RiemannianModel& model, double m,
                              bool allow_subcritical = false);

/// Classical Gelfand term f(u) = e^u (the R = 1 Euclidean specialization).
Nonlinearity make_gelfand_classic();

/// Classical power term f(u) = (1+u)^m, m > 1.
Nonlinearity make_power_classic(double m);

/// Wraps user evaluators and runs the validity probes.
Nonlinearity make_custom_nonlinearity(std::function<double(double)> f,
                                      std::function<double(double)> f_prime);

/// Checked evaluation; throws OverflowError when the result would overflow
/// (u > 700 for the exponential kinds).
double eval(const Nonlinearity& nl, double u);
double eval_prime(const Nonlinearity& nl, double u);

} // namespace gelfand
