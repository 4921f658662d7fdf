#include "gelfand/mesh.hpp"

#include <cmath>

#include "gelfand/errors.hpp"

namespace gelfand {

RadialMesh RadialMesh::uniform(double R, int N) {
  if (N < 2) throw DomainError("mesh: need at least 2 interior points");
  if (!(R > 0)) throw DomainError("mesh: radius must be positive");
  RadialMesh m;
  m.n_points = N;
  m.radius = R;
  m.h = R / (N + 0.5);
  m.nodes.resize(N);
  for (int i = 0; i < N; ++i) m.nodes[i] = (i + 0.5) * m.h;
  return m;
}

DiscreteOperator assemble_laplacian(const RiemannianModel& model, const RadialMesh& mesh) {
  const int N = mesh.n_points;
  const double h = mesh.h;
  DiscreteOperator op;
  op.n_points = N;
  op.h = h;
  op.face_weight.resize(N + 1);
  op.face_weight[0] = 0.0; // psi(0) = 0 kills the origin flux
  for (int k = 1; k <= N; ++k) {
    double p = model.psi(mesh.face(k));
    if (!(p > 0)) throw GeometryError("assemble_laplacian: psi <= 0 at a face");
    op.face_weight[k] = std::pow(p, model.dim - 1);
  }
  op.weight.resize(N);
  op.sub.resize(N);
  op.diag.resize(N);
  op.super.resize(N);
  const double h2 = h * h;
  for (int i = 0; i < N; ++i) {
    double p = model.psi(mesh.node(i));
    if (!(p > 0)) throw GeometryError("assemble_laplacian: psi <= 0 at a node");
    op.weight[i] = std::pow(p, model.dim - 1);
    op.sub[i] = -op.face_weight[i] / (op.weight[i] * h2);
    op.super[i] = -op.face_weight[i + 1] / (op.weight[i] * h2);
    op.diag[i] = (op.face_weight[i] + op.face_weight[i + 1]) / (op.weight[i] * h2);
  }
  return op;
}

void DiscreteOperator::apply(std::span<const double> u, std::span<double> out) const {
  const int N = n_points;
  for (int i = 0; i < N; ++i) {
    double v = diag[i] * u[i];
    if (i > 0) v += sub[i] * u[i - 1];
    if (i + 1 < N) v += super[i] * u[i + 1];
    out[i] = v; // ghost u_N = 0
  }
}

void DiscreteOperator::apply_abs(std::span<const double> u, std::span<double> out) const {
  const int N = n_points;
  for (int i = 0; i < N; ++i) {
    double v = diag[i] * std::abs(u[i]);
    if (i > 0) v += std::abs(sub[i]) * std::abs(u[i - 1]);
    if (i + 1 < N) v += std::abs(super[i]) * std::abs(u[i + 1]);
    out[i] = v;
  }
}

void TridiagonalSolver::factor(std::span<const double> sub, std::span<const double> diag,
                               std::span<const double> super) {
  const int N = static_cast<int>(diag.size());
  n_ = N;
  piv_.assign(N, 0.0);
  up1_.assign(N, 0.0);
  up2_.assign(N, 0.0);
  mult_.assign(N, 0.0);
  swapped_.assign(N, 0);

  double scale = 0.0;
  for (int i = 0; i < N; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(sub[i]);
    if (i + 1 < N) row += std::abs(super[i]);
    scale = std::max(scale, row);
  }
  const double floor = 1e-14 * scale;

  // running row i: (piv, up1, up2); next row enters as (sub, diag, super)
  double p = diag[0], q = (N > 1) ? super[0] : 0.0, s = 0.0;
  for (int i = 0; i + 1 < N; ++i) {
    double a = sub[i + 1], b = diag[i + 1], c = (i + 2 < N) ? super[i + 1] : 0.0;
    if (std::abs(a) > std::abs(p)) {
      swapped_[i] = 1;
      std::swap(p, a);
      std::swap(q, b);
      std::swap(s, c);
    }
    if (!(std::abs(p) > floor)) throw SingularJacobian("tridiagonal pivot below 1e-14 * scale");
    double l = a / p;
    mult_[i] = l;
    piv_[i] = p;
    up1_[i] = q;
    up2_[i] = s;
    p = b - l * q;
    q = c - l * s;
    s = 0.0;
  }
  if (!(std::abs(p) > floor)) throw SingularJacobian("tridiagonal pivot below 1e-14 * scale");
  piv_[N - 1] = p;
  up1_[N - 1] = 0.0;
  up2_[N - 1] = 0.0;
}

void TridiagonalSolver::solve(std::span<const double> rhs, std::span<double> x) const {
  const int N = n_;
  for (int i = 0; i < N; ++i) x[i] = rhs[i];
  for (int i = 0; i + 1 < N; ++i) {
    if (swapped_[i]) std::swap(x[i], x[i + 1]);
    x[i + 1] -= mult_[i] * x[i];
  }
  for (int i = N - 1; i >= 0; --i) {
    double v = x[i];
    if (i + 1 < N) v -= up1_[i] * x[i + 1];
    if (i + 2 < N) v -= up2_[i] * x[i + 2];
    x[i] = v / piv_[i];
  }
}

} // namespace gelfand
