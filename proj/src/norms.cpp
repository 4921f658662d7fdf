#include "gelfand/norms.hpp"

#include <cmath>
#include <limits>

#include "gelfand/errors.hpp"

namespace gelfand {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double sphere_area(int n) {
  if (n < 2) throw DomainError("sphere_area: requires n >= 2");
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double weighted_lp_norm(const RiemannianModel& model, const RadialMesh& mesh,
                        std::span<const double> u, double p) {
  if (!(p >= 1)) throw DomainError("weighted_lp_norm: requires p >= 1");
  const int N = mesh.n_points;
  if (std::isinf(p)) {
    double m = 0.0;
    for (int i = 0; i < N; ++i) m = std::max(m, std::abs(u[i]));
    return m;
  }
  double omega = sphere_area(model.dim);
  double s = 0.0;
  for (int i = 0; i < N; ++i)
    s += std::pow(std::abs(u[i]), p) * std::pow(model.psi(mesh.node(i)), model.dim - 1);
  // the cells of the N interior nodes tile [0, R - h/2]; the boundary sliver
  // [R - h/2, R] is assigned to the last node, keeping the rule second order
  s += 0.5 * std::pow(std::abs(u[N - 1]), p) * std::pow(model.psi(mesh.node(N - 1)), model.dim - 1);
  return std::pow(omega * s * mesh.h, 1.0 / p);
}

std::vector<double> radial_gradient(const RadialMesh& mesh, std::span<const double> u) {
  const int N = mesh.n_points;
  std::vector<double> g(N);
  const double two_h = 2.0 * mesh.h;
  // centered in the interior, reflection ghost at the origin (radial
  // functions are even in r), one-sided at the outer node so that constants
  // have zero gradient
  g[0] = (u[1] - u[0]) / two_h;
  for (int i = 1; i + 1 < N; ++i) g[i] = (u[i + 1] - u[i - 1]) / two_h;
  g[N - 1] = (u[N - 1] - u[N - 2]) / mesh.h;
  return g;
}

double weighted_w1p_seminorm(const RiemannianModel& model, const RadialMesh& mesh,
                             std::span<const double> u, double p) {
  auto g = radial_gradient(mesh, u);
  return weighted_lp_norm(model, mesh, g, p);
}

double weighted_w1p_norm(const RiemannianModel& model, const RadialMesh& mesh,
                         std::span<const double> u, double p) {
  double a = weighted_lp_norm(model, mesh, u, p);
  double b = weighted_w1p_seminorm(model, mesh, u, p);
  if (std::isinf(p)) return std::max(a, b);
  return std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
}

double weak_residual(const RiemannianModel& model, const RadialMesh& mesh,
                     std::span<const double> u, double lambda, const Nonlinearity& nl,
                     int test_family_size, bool analytic_laplacian) {
  if (test_family_size < 1) throw DomainError("weak_residual: empty test family");
  const int N = mesh.n_points;
  const double R = mesh.radius;
  const double h = mesh.h;
  const double omega = sphere_area(model.dim);

  std::vector<double> w(N);
  for (int i = 0; i < N; ++i) w[i] = std::pow(model.psi(mesh.node(i)), model.dim - 1);

  DiscreteOperator op;
  if (!analytic_laplacian) op = assemble_laplacian(model, mesh);

  std::vector<double> xi(N), neg_lap(N);
  double worst = 0.0;
  for (int k = 2; k <= test_family_size + 1; ++k) {
    for (int i = 0; i < N; ++i) {
      double r = mesh.node(i);
      double s2 = (r / R) * (r / R);
      xi[i] = std::pow(1.0 - s2, k);
    }
    if (analytic_laplacian) {
      for (int i = 0; i < N; ++i) {
        double r = mesh.node(i);
        double s2 = (r / R) * (r / R);
        double xr = -2.0 * k * r / (R * R) * std::pow(1.0 - s2, k - 1);
        double xrr = -2.0 * k / (R * R) * std::pow(1.0 - s2, k - 1) +
                     4.0 * k * (k - 1.0) * r * r / (R * R * R * R) * std::pow(1.0 - s2, k - 2);
        neg_lap[i] = -(xrr + (model.dim - 1.0) * model.psi_prime(r) / model.psi(r) * xr);
      }
    } else {
      op.apply(xi, neg_lap);
    }
    double t1 = 0.0, t2 = 0.0, scale = 0.0;
    for (int i = 0; i < N; ++i) {
      t1 += u[i] * neg_lap[i] * w[i];
      t2 += nl.f(u[i]) * xi[i] * w[i];
      scale += std::abs(xi[i]) * w[i];
    }
    t1 *= h * omega;
    t2 *= lambda * h * omega;
    scale *= h * omega;
    worst = std::max(worst, std::abs(t1 - t2) / scale);
  }
  return worst;
}

} // namespace gelfand
