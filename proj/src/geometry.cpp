#include "gelfand/geometry.hpp"

#include <cmath>
#include <limits>

#include "gelfand/errors.hpp"

namespace gelfand {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHypTol = 1e-10; // tolerance for the psi hypotheses at r = 0

double simpson(const std::function<double(double)>& g, double a, double b, int panels) {
  double h = (b - a) / panels;
  double s = g(a) + g(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
  return s * h / 3.0;
}

// adaptive-by-doubling composite Simpson, relative target 1e-12
double integrate(const std::function<double(double)>& g, double a, double b) {
  if (b <= a) return 0.0;
  int panels = 64;
  double prev = simpson(g, a, b, panels);
  for (int it = 0; it < 16; ++it) {
    panels *= 2;
    double cur = simpson(g, a, b, panels);
    if (std::abs(cur - prev) <= 1e-12 * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

} // namespace

std::string to_string(SpaceForm kind) {
  switch (kind) {
    case SpaceForm::Euclidean: return "euclidean";
    case SpaceForm::Hyperbolic: return "hyperbolic";
    case SpaceForm::Elliptic: return "elliptic";
    case SpaceForm::Custom: return "custom";
  }
  return "?";
}

RiemannianModel make_space_form(SpaceForm kind, int n, double R) {
  if (n < 2) throw DomainError("dimension must satisfy n >= 2");
  if (!(R > 0)) throw DomainError("ball radius must be positive");
  RiemannianModel m;
  m.dim = n;
  m.radius = R;
  m.kind = kind;
  switch (kind) {
    case SpaceForm::Euclidean:
      m.psi = [](double r) { return r; };
      m.psi_prime = [](double) { return 1.0; };
      m.psi_second = [](double) { return 0.0; };
      m.curvature = 0;
      break;
    case SpaceForm::Hyperbolic:
      m.psi = [](double r) { return std::sinh(r); };
      m.psi_prime = [](double r) { return std::cosh(r); };
      m.psi_second = [](double r) { return std::sinh(r); };
      m.curvature = -1;
      break;
    case SpaceForm::Elliptic:
      if (!(R < kPi)) throw DomainError("elliptic ball radius must satisfy R < pi");
      m.psi = [](double r) { return std::sin(r); };
      m.psi_prime = [](double r) { return std::cos(r); };
      m.psi_second = [](double r) { return -std::sin(r); };
      m.curvature = 1;
      break;
    case SpaceForm::Custom:
      throw DomainError("custom models are built with make_custom_model");
  }
  return m;
}

RiemannianModel make_custom_model(int n, double R, std::function<double(double)> psi,
                                  std::function<double(double)> psi_prime,
                                  std::function<double(double)> psi_second) {
  if (n < 2) throw DomainError("dimension must satisfy n >= 2");
  if (!(R > 0)) throw DomainError("ball radius must be positive");
  if (!psi || !psi_prime || !psi_second)
    throw DomainError("custom model needs all three evaluators (psi, psi', psi'')");
  if (std::abs(psi(0.0)) > kHypTol) throw GeometryError("psi(0) != 0");
  if (std::abs(psi_prime(0.0) - 1.0) > kHypTol) throw GeometryError("psi'(0) != 1");
  if (std::abs(psi_second(0.0)) > kHypTol) throw GeometryError("psi''(0) != 0");
  const int probes = 512;
  for (int i = 1; i <= probes; ++i) {
    double r = R * i / probes;
    if (!(psi(r) > 0)) throw GeometryError("psi must be positive on (0,R]");
  }
  RiemannianModel m;
  m.dim = n;
  m.radius = R;
  m.kind = SpaceForm::Custom;
  m.psi = std::move(psi);
  m.psi_prime = std::move(psi_prime);
  m.psi_second = std::move(psi_second);
  return m;
}

double phi(const RiemannianModel& model, double r) {
  if (r < 0 || r > model.radius) throw DomainError("phi: r outside [0,R]");
  switch (model.kind) {
    case SpaceForm::Hyperbolic: return std::cosh(r) - 1.0;
    case SpaceForm::Euclidean: return 0.5 * r * r;
    case SpaceForm::Elliptic: return 1.0 - std::cos(r);
    case SpaceForm::Custom: return integrate(model.psi, 0.0, r);
  }
  return 0.0;
}

double sup_phi_over_psi(const RiemannianModel& model) {
  const double R = model.radius;
  switch (model.kind) {
    case SpaceForm::Hyperbolic: return (std::cosh(R) - 1.0) / std::sinh(R);
    case SpaceForm::Euclidean: return 0.5 * R;
    case SpaceForm::Elliptic: return (1.0 - std::cos(R)) / std::sin(R);
    case SpaceForm::Custom: break;
  }
  // dense scan, then golden-section polish on the best cell
  const int cells = 10240;
  auto ratio = [&](double r) { return phi(model, r) / model.psi(r); };
  double best = ratio(R), best_r = R;
  for (int i = 1; i < cells; ++i) {
    double r = R * i / cells;
    double v = ratio(r);
    if (v > best) { best = v; best_r = r; }
  }
  double a = std::max(0.0, best_r - R / cells), b = std::min(R, best_r + R / cells);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = ratio(x1), f2 = ratio(x2);
  while (b - a > 1e-12 * R) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = ratio(x2);
    } else {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = ratio(x1);
    }
  }
  return std::max(best, std::max(f1, f2));
}

double hardy_constant(const RiemannianModel& model) {
  if (model.dim < 3) throw DomainError("hardy_constant: requires n >= 3");
  if (!model.curvature)
    throw DomainError("hardy_constant: curvature sign undefined for custom models");
  double s = sup_phi_over_psi(model);
  double n = model.dim;
  return 0.25 * (1.0 / (s * s) - n * (n - 2.0) * *model.curvature);
}

CriticalRadii critical_radii(const RiemannianModel& model) {
  if (model.dim < 3) throw DomainError("critical_radii: requires n >= 3");
  if (!model.curvature)
    throw DomainError("critical_radii: curvature sign undefined for custom models");
  const double inf = std::numeric_limits<double>::infinity();
  if (model.kind != SpaceForm::Elliptic) return {inf, inf, inf};
  double n = model.dim;
  // (1+cos s)/(1-cos s) = n(n-2)  =>  cos R0 = (n(n-2)-1)/(n(n-2)+1)
  double q = n * (n - 2.0);
  double r0 = std::min(std::acos((q - 1.0) / (q + 1.0)), 0.5 * kPi);
  double re = std::asin(std::sqrt((n - 2.0) / (n - 1.0)));
  double rp = std::asin(std::sqrt((n - 2.0) / n));
  return {r0, re, rp};
}

double delta_psi(const RiemannianModel& model) {
  if (!(model.psi_prime(0.0) > 0)) throw GeometryError("delta_psi: psi'(0+) <= 0");
  double cap = 0.49 * model.radius;
  switch (model.kind) {
    case SpaceForm::Hyperbolic:
    case SpaceForm::Euclidean:
      return cap;
    case SpaceForm::Elliptic:
      return std::min(cap, std::nextafter(0.5 * kPi, 0.0));
    case SpaceForm::Custom: break;
  }
  // largest grid point below cap with psi' > 0 so far
  const int grid = 4096;
  double delta = 0.0;
  for (int i = 1; i <= grid; ++i) {
    double r = cap * i / grid;
    if (!(model.psi_prime(r) > 0)) break;
    delta = r;
  }
  if (delta == 0.0) throw GeometryError("delta_psi: psi'(0+) <= 0");
  return delta;
}

} // namespace gelfand
