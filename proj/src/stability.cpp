#include "gelfand/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gelfand/errors.hpp"
#include "gelfand/norms.hpp"

namespace gelfand {

namespace {

// symmetric tridiagonal pencil: d_i = diag_i - lambda f'(u_i),
// offdiag t_i = -fw_{i+1} / (h^2 sqrt(w_i w_{i+1}))
struct SymTridiag {
  std::vector<double> d, t; // t has size N-1
};

SymTridiag symmetrize(const DiscreteOperator& op, const Nonlinearity& nl, double lambda,
                      std::span<const double> u) {
  const int N = op.n_points;
  SymTridiag s;
  s.d.resize(N);
  s.t.resize(N - 1);
  for (int i = 0; i < N; ++i) s.d[i] = op.diag[i] - lambda * nl.f_prime(u[i]);
  const double h2 = op.h * op.h;
  for (int i = 0; i + 1 < N; ++i)
    s.t[i] = -op.face_weight[i + 1] / (h2 * std::sqrt(op.weight[i] * op.weight[i + 1]));
  return s;
}

// number of eigenvalues of S strictly below x (Sturm/LDL^T inertia count)
int sturm_count(const SymTridiag& s, double x, double pivmin) {
  int count = 0;
  double q = s.d[0] - x;
  if (q < 0) ++count;
  for (size_t i = 0; i < s.t.size(); ++i) {
    if (std::abs(q) < pivmin) q = (q < 0) ? -pivmin : pivmin;
    q = (s.d[i + 1] - x) - s.t[i] * s.t[i] / q;
    if (q < 0) ++count;
  }
  return count;
}

} // namespace

EigenPair principal_eigenvalue(const RiemannianModel& model, const RadialMesh& mesh,
                               const Nonlinearity& nl, double lambda,
                               std::span<const double> u, double eig_tol, int max_iter) {
  const int N = mesh.n_points;
  DiscreteOperator op = assemble_laplacian(model, mesh);
  SymTridiag s = symmetrize(op, nl, lambda, u);

  // Gershgorin bounds
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double tmax = 0.0;
  for (int i = 0; i < N; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(s.t[i - 1]);
    if (i + 1 < N) r += std::abs(s.t[i]);
    lo = std::min(lo, s.d[i] - r);
    hi = std::max(hi, s.d[i] + r);
    tmax = std::max(tmax, std::abs(s.d[i]) + r);
  }
  const double pivmin = 1e-300 + 1e-16 * tmax;

  // localize the smallest eigenvalue by bisection on the inertia count
  double a = lo, b = hi;
  for (int it = 0; it < 220 && (b - a) > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    double mid = 0.5 * (a + b);
    if (sturm_count(s, mid, pivmin) >= 1)
      b = mid;
    else
      a = mid;
  }

  // inverse power iteration shifted just below the localized eigenvalue
  double width = std::max(b - a, 1e-14 * (1.0 + std::abs(b)));
  double shift = a - width;
  std::vector<double> sub(N, 0.0), dia(N), sup(N, 0.0), v(N, 1.0 / std::sqrt(double(N))), y(N);
  TridiagonalSolver lu;
  bool factored = false;
  for (int attempt = 0; attempt < 8 && !factored; ++attempt) {
    for (int i = 0; i < N; ++i) dia[i] = s.d[i] - shift;
    for (int i = 0; i + 1 < N; ++i) sup[i] = s.t[i];
    for (int i = 1; i < N; ++i) sub[i] = s.t[i - 1];
    try {
      lu.factor(sub, dia, sup);
      factored = true;
    } catch (const SingularJacobian&) {
      shift -= std::max(1.0, std::abs(shift)) * 1e-10 * std::pow(4.0, attempt);
    }
  }
  if (!factored) throw NoConvergence("principal_eigenvalue: could not factor shifted matrix");

  // Rayleigh quotient plus the roundoff scale of its evaluation; the plain
  // 1e-10 window is unreachable once the matrix scale approaches 1/eps
  auto rayleigh = [&](const std::vector<double>& x, double& abs_scale) {
    double num = 0.0, mag = 0.0;
    for (int i = 0; i < N; ++i) {
      double sx = s.d[i] * x[i];
      double ax = std::abs(s.d[i] * x[i]);
      if (i > 0) {
        sx += s.t[i - 1] * x[i - 1];
        ax += std::abs(s.t[i - 1] * x[i - 1]);
      }
      if (i + 1 < N) {
        sx += s.t[i] * x[i + 1];
        ax += std::abs(s.t[i] * x[i + 1]);
      }
      num += x[i] * sx;
      mag += std::abs(x[i]) * ax;
    }
    abs_scale = mag;
    return num; // x normalized
  };

  constexpr double kEps = 2.220446049250313e-16;
  double rho_scale = 0.0;
  double rho = rayleigh(v, rho_scale), rho_prev;
  int it = 0;
  for (;; ++it) {
    if (it >= max_iter) throw NoConvergence("principal_eigenvalue: inverse iteration stalled");
    lu.solve(v, y);
    double nrm = 0.0;
    for (double x : y) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0) || !std::isfinite(nrm))
      throw NoConvergence("principal_eigenvalue: iteration vector degenerated");
    for (int i = 0; i < N; ++i) v[i] = y[i] / nrm;
    rho_prev = rho;
    rho = rayleigh(v, rho_scale);
    if (it > 0 && std::abs(rho - rho_prev) <
                      eig_tol * (1.0 + std::abs(rho)) + 16.0 * kEps * rho_scale)
      break;
  }

  EigenPair pair;
  pair.lambda1 = rho;
  pair.phi1.resize(N);
  // phi = D^{-1/2} v, normalized in the weighted L^2 norm, positive sign
  double sgn = 0.0;
  for (int i = 0; i < N; ++i) sgn += v[i] * std::sqrt(op.weight[i]);
  double flip = (sgn < 0) ? -1.0 : 1.0;
  for (int i = 0; i < N; ++i) pair.phi1[i] = flip * v[i] / std::sqrt(op.weight[i]);
  double nrm = weighted_lp_norm(model, mesh, pair.phi1, 2.0);
  for (int i = 0; i < N; ++i) pair.phi1[i] /= nrm;
  return pair;
}

double quadratic_form(const RiemannianModel& model, const RadialMesh& mesh,
                      const Nonlinearity& nl, double lambda,
                      std::span<const double> u, std::span<const double> xi) {
  const int N = mesh.n_points;
  const double h = mesh.h;
  double grad = 0.0;
  for (int k = 1; k <= N; ++k) {
    double xi_hi = (k < N) ? xi[k] : 0.0; // ghost xi(R) = 0
    double d = (xi_hi - xi[k - 1]) / h;
    grad += std::pow(model.psi(mesh.face(k)), model.dim - 1) * d * d;
  }
  double mass = 0.0;
  for (int i = 0; i < N; ++i)
    mass += std::pow(model.psi(mesh.node(i)), model.dim - 1) * lambda * nl.f_prime(u[i]) *
            xi[i] * xi[i];
  return (grad - mass) * h;
}

std::vector<EtaFunction> default_eta_family(const RiemannianModel& model) {
  std::vector<EtaFunction> fam;
  const double R = model.radius;
  for (int k = 1; k <= 4; ++k) {
    fam.push_back({[R, k](double r) { return std::pow(1.0 - r / R, k); },
                   [R, k](double r) { return -k / R * std::pow(1.0 - r / R, k - 1); }});
  }
  // truncated psi^{-alpha} with alpha = 1, concentrated at the origin
  const double delta = delta_psi(model);
  const double eps = delta / 10.0;
  auto psi = model.psi;
  auto dpsi = model.psi_prime;
  double cap = 1.0 / psi(eps), off = 1.0 / psi(delta);
  fam.push_back({[=](double r) {
                   if (r >= delta) return 0.0;
                   if (r <= eps) return cap - off;
                   return 1.0 / psi(r) - off;
                 },
                 [=](double r) {
                   if (r >= delta || r <= eps) return 0.0;
                   double p = psi(r);
                   return -dpsi(r) / (p * p);
                 }});
  return fam;
}

std::vector<std::pair<double, double>>
etapsi_check(const RiemannianModel& model, const RadialMesh& mesh,
             std::span<const double> u, const std::vector<EtaFunction>& family) {
  const int N = mesh.n_points;
  const double h = mesh.h;
  const double n = model.dim;
  std::vector<std::pair<double, double>> out;
  out.reserve(family.size());
  for (const auto& ef : family) {
    double lhs = 0.0, rhs = 0.0;
    for (int k = 1; k <= N; ++k) {
      double r = mesh.face(k);
      double u_hi = (k < N) ? u[k] : 0.0;
      double ur = (u_hi - u[k - 1]) / h;
      double p = model.psi(r), dp = model.psi_prime(r), ddp = model.psi_second(r);
      double e = ef.eta(r), de = ef.eta_prime(r);
      double pw = std::pow(p, n - 1.0);
      double base = pw * ur * ur;
      lhs += (n - 1.0) * base * dp * dp * e * e;
      double pe_r = dp * e + p * de;
      rhs += base * (pe_r * pe_r + (n - 1.0) * p * ddp * e * e);
    }
    out.emplace_back(lhs * h, rhs * h);
  }
  return out;
}

double key_estimate_ratio(const RiemannianModel& model, const RadialMesh& mesh,
                          std::span<const double> u, double alpha) {
  const double n = model.dim;
  if (!(alpha >= 1.0) || !(alpha < 1.0 + std::sqrt(n - 1.0)))
    throw DomainError("key_estimate_ratio: requires 1 <= alpha < 1 + sqrt(n-1)");
  const double delta = delta_psi(model);
  const int N = mesh.n_points;
  const double h = mesh.h;
  double num = 0.0;
  for (int k = 1; k <= N; ++k) {
    double r = mesh.face(k);
    if (r > delta) break;
    double u_hi = (k < N) ? u[k] : 0.0;
    double ur = (u_hi - u[k - 1]) / h;
    num += ur * ur * std::pow(model.psi(r), n - 1.0 - 2.0 * alpha);
  }
  num *= h;
  double l1 = weighted_lp_norm(model, mesh, u, 1.0);
  return num / (l1 * l1);
}

} // namespace gelfand
