#include "gelfand/nonlinearity.hpp"

#include <cmath>

#include "gelfand/errors.hpp"

namespace gelfand {

namespace {

bool is_exp_kind(NonlinearityKind k) {
  return k == NonlinearityKind::ExpModel || k == NonlinearityKind::GelfandClassic;
}

// f(0) > 0, f' >= 0 on a probe grid, f(t)/t increasing between the probe
// points.  Exponential kinds are probed in log scale (e^1000 overflows).
void validate(const Nonlinearity& nl) {
  if (!(nl.f(0.0) > 0)) throw ValidityError("nonlinearity must satisfy f(0) > 0");
  const int probes = 64;
  const double u_max_probe = 50.0;
  for (int i = 0; i <= probes; ++i) {
    double u = u_max_probe * i / probes;
    if (!(nl.f_prime(u) >= 0)) throw ValidityError("nonlinearity must be nondecreasing");
  }
  double t1 = 1e3, t2 = 1e6;
  double r1, r2;
  if (is_exp_kind(nl.kind)) {
    // log(f(t)/t) = t - 2 log psi_R - log t + o(1)
    r1 = t1 - 2.0 * std::log(nl.psi_R) - std::log(t1);
    r2 = t2 - 2.0 * std::log(nl.psi_R) - std::log(t2);
  } else {
    r1 = nl.f(t1) / t1;
    r2 = nl.f(t2) / t2;
    if (!std::isfinite(r1)) {
      t1 = 300.0; t2 = 600.0;
      r1 = nl.f(t1) / t1;
      r2 = nl.f(t2) / t2;
    }
  }
  if (!(r2 > r1)) throw ValidityError("superlinearity probe failed: f(t)/t not increasing");
}

} // namespace

std::string to_string(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::ExpModel: return "exp-model";
    case NonlinearityKind::PowerModel: return "power-model";
    case NonlinearityKind::GelfandClassic: return "gelfand";
    case NonlinearityKind::PowerClassic: return "power-classic";
    case NonlinearityKind::Custom: return "custom";
  }
  return "?";
}

Nonlinearity make_exp_model(const RiemannianModel& model) {
  if (model.dim < 3) throw DomainError("exp-model: requires n >= 3");
  if (!model.curvature) throw DomainError("exp-model: requires a space form");
  if (model.kind == SpaceForm::Elliptic) {
    double re = critical_radii(model).re;
    if (!(model.radius < re))
      throw ValidityError("exp-model: elliptic radius must satisfy R < R_e");
  }
  Nonlinearity nl;
  nl.kind = NonlinearityKind::ExpModel;
  nl.psi_R = model.psi(model.radius);
  nl.curvature = *model.curvature;
  double a = 1.0 / (nl.psi_R * nl.psi_R);
  double b = (model.dim - 1.0) / (model.dim - 2.0) * nl.curvature;
  nl.f = [a, b](double u) { return a * std::exp(u) - b; };
  nl.f_prime = [a](double u) { return a * std::exp(u); };
  nl.sup_guard = 500.0;
  validate(nl);
  return nl;
}

Nonlinearity make_power_model(const RiemannianModel& model, double m, bool allow_subcritical) {
  if (!(m > 1)) throw DomainError("power-model: requires m > 1");
  if (!model.curvature) throw DomainError("power-model: requires a space form");
  double n = model.dim;
  if (!allow_subcritical && !(m > (n + 2.0) / (n - 2.0)))
    throw ValidityError("power-model: requires m > (n+2)/(n-2)");
  if (model.kind == SpaceForm::Elliptic) {
    double rp = critical_radii(model).rp;
    if (!(model.radius < rp))
      throw ValidityError("power-model: elliptic radius must satisfy R < R_p");
  }
  double denom = (m - 1.0) * n - 2.0 * m;
  if (model.curvature != 0 && !(denom > 0))
    throw ValidityError("power-model: (m-1)n - 2m must be positive for curved models");
  Nonlinearity nl;
  nl.kind = NonlinearityKind::PowerModel;
  nl.m = m;
  nl.psi_R = model.psi(model.radius);
  nl.curvature = *model.curvature;
  double c = std::pow(nl.psi_R, -2.0 / (m - 1.0));
  double beta = (model.curvature == 0) ? 0.0 : ((m - 1.0) * n - (m + 1.0)) / denom;
  double bk = beta * nl.curvature;
  nl.f = [c, m, bk](double u) {
    double v = u + c;
    return v * (std::pow(v, m - 1.0) - bk);
  };
  nl.f_prime = [c, m, bk](double u) {
    return m * std::pow(u + c, m - 1.0) - bk;
  };
  nl.sup_guard = std::min(1e12, std::exp(690.0 / m));
  validate(nl);
  return nl;
}

Nonlinearity make_gelfand_classic() {
  Nonlinearity nl;
  nl.kind = NonlinearityKind::GelfandClassic;
  nl.psi_R = 1.0;
  nl.f = [](double u) { return std::exp(u); };
  nl.f_prime = [](double u) { return std::exp(u); };
  nl.sup_guard = 500.0;
  validate(nl);
  return nl;
}

Nonlinearity make_power_classic(double m) {
  if (!(m > 1)) throw DomainError("power-classic: requires m > 1");
  Nonlinearity nl;
  nl.kind = NonlinearityKind::PowerClassic;
  nl.m = m;
  nl.psi_R = 1.0;
  nl.f = [m](double u) { return std::pow(1.0 + u, m); };
  nl.f_prime = [m](double u) { return m * std::pow(1.0 + u, m - 1.0); };
  nl.sup_guard = std::min(1e12, std::exp(690.0 / m));
  validate(nl);
  return nl;
}

Nonlinearity make_custom_nonlinearity(std::function<double(double)> f,
                                      std::function<double(double)> f_prime) {
  if (!f || !f_prime) throw DomainError("custom nonlinearity needs f and f'");
  Nonlinearity nl;
  nl.kind = NonlinearityKind::Custom;
  nl.f = std::move(f);
  nl.f_prime = std::move(f_prime);
  validate(nl);
  return nl;
}

double eval(const Nonlinearity& nl, double u) {
  if (!std::isfinite(u)) throw DomainError("eval: u must be finite");
  if (is_exp_kind(nl.kind) && u > nl.overflow_guard)
    throw OverflowError("eval: exp argument above overflow guard");
  double v = nl.f(u);
  if (!std::isfinite(v)) throw OverflowError("eval: f(u) overflowed");
  return v;
}

double eval_prime(const Nonlinearity& nl, double u) {
  if (!std::isfinite(u)) throw DomainError("eval_prime: u must be finite");
  if (is_exp_kind(nl.kind) && u > nl.overflow_guard)
    throw OverflowError("eval_prime: exp argument above overflow guard");
  double v = nl.f_prime(u);
  if (!std::isfinite(v)) throw OverflowError("eval_prime: f'(u) overflowed");
  return v;
}

} // namespace gelfand
