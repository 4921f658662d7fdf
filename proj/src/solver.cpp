#include "gelfand/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "gelfand/errors.hpp"
#include "gelfand/stability.hpp"

namespace gelfand {

namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr double kRoundoffFactor = 64.0;

struct Workspace {
  std::vector<double> res, absau, fu, du, utry, ftry, rtry, dtest;
  explicit Workspace(int n)
      : res(n), absau(n), fu(n), du(n), utry(n), ftry(n), rtry(n), dtest(n) {}
};

// componentwise scaled residual: max_i |(Au - lam f)_i| /
//   (1 + lam |f_i| + (c eps / tol) (|A||u|)_i); converged iff <= tol
double scaled_residual(const DiscreteOperator& op, const Nonlinearity& nl, double lambda,
                       std::span<const double> u, double tol, Workspace& ws) {
  const int N = op.n_points;
  op.apply(u, ws.res);
  op.apply_abs(u, ws.absau);
  double worst = 0.0;
  for (int i = 0; i < N; ++i) {
    double fi = nl.f(u[i]);
    if (!std::isfinite(fi)) return std::numeric_limits<double>::infinity();
    double r = ws.res[i] - lambda * fi;
    double scale = 1.0 + lambda * std::abs(fi) + (kRoundoffFactor * kEps / tol) * ws.absau[i];
    worst = std::max(worst, std::abs(r) / scale);
  }
  return worst;
}

bool within_guard(std::span<const double> u, double guard) {
  for (double x : u)
    if (!(x <= guard) || !std::isfinite(x)) return false;
  return true;
}

// Damped Newton; returns false on failure (no throw) so continuation can
// back off.  Hard singularities surface as failures too.
bool newton_try(const DiscreteOperator& op, const Nonlinearity& nl, double lambda,
                std::vector<double>& u, double tol, int max_iter, double guard, int& iters,
                Workspace& ws) {
  const int N = op.n_points;
  std::vector<double> sub(N), dia(N), sup(N);
  TridiagonalSolver lu;
  for (int it = 0; it < max_iter; ++it) {
    double rn = scaled_residual(op, nl, lambda, u, tol, ws);
    if (rn <= tol) {
      iters = it;
      return true;
    }
    if (!std::isfinite(rn)) return false;
    for (int i = 0; i < N; ++i) {
      double fp = nl.f_prime(u[i]);
      if (!std::isfinite(fp)) return false;
      sub[i] = op.sub[i];
      sup[i] = op.super[i];
      dia[i] = op.diag[i] - lambda * fp;
      ws.res[i] = -(ws.res[i] - lambda * nl.f(u[i]));
    }
    try {
      lu.factor(sub, dia, sup);
    } catch (const SingularJacobian&) {
      return false;
    }
    lu.solve(ws.res, ws.du);
    double nd = 0.0, umax = 0.0;
    for (int i = 0; i < N; ++i) {
      nd = std::max(nd, std::abs(ws.du[i]));
      umax = std::max(umax, std::abs(u[i]));
    }
    if (!std::isfinite(nd)) return false;

    if (nd <= 1e-5 * (1.0 + umax)) {
      // noise-scale step: plain Newton, no monotonicity veto
      for (int i = 0; i < N; ++i) u[i] += ws.du[i];
      if (!within_guard(u, guard)) return false;
      continue;
    }
    double t = 1.0;
    bool accepted = false;
    for (int half = 0; half < 30; ++half) {
      for (int i = 0; i < N; ++i) ws.utry[i] = u[i] + t * ws.du[i];
      if (within_guard(ws.utry, guard)) {
        bool finite = true;
        for (int i = 0; i < N; ++i) {
          double fi = nl.f(ws.utry[i]);
          if (!std::isfinite(fi)) { finite = false; break; }
          ws.ftry[i] = fi;
        }
        if (finite) {
          op.apply(ws.utry, ws.rtry);
          for (int i = 0; i < N; ++i) ws.rtry[i] = -(ws.rtry[i] - lambda * ws.ftry[i]);
          lu.solve(ws.rtry, ws.dtest);
          double ndt = 0.0;
          for (int i = 0; i < N; ++i) ndt = std::max(ndt, std::abs(ws.dtest[i]));
          // natural monotonicity: the simplified Newton step must contract
          if (std::isfinite(ndt) && ndt < nd) {
            u = ws.utry;
            accepted = true;
            break;
          }
        }
      }
      t *= 0.5;
    }
    if (!accepted) return false;
  }
  return false;
}

bool positive_and_decreasing(std::span<const double> u) {
  double sup = 0.0;
  for (double x : u) sup = std::max(sup, x);
  double slack = 1e-12 * sup;
  for (size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0)) return false;
    if (i + 1 < u.size() && u[i + 1] > u[i] + slack) return false;
  }
  return true;
}

bool pointwise_above(std::span<const double> u, std::span<const double> prev) {
  for (size_t i = 0; i < u.size(); ++i)
    if (u[i] < prev[i] - 1e-10) return false;
  return true;
}

// bordered solve: A u - lam f(u) = 0 pinned at u_0 = M, lam free
bool solve_at_height_impl(const DiscreteOperator& op, const Nonlinearity& nl,
                          std::vector<double>& u, double& lambda, double M, double tol,
                          double guard, Workspace& ws) {
  const int N = op.n_points;
  std::vector<double> uw = u, sub(N), dia(N), sup(N), a(N), b(N);
  double lw = lambda;
  TridiagonalSolver lu;
  for (int it = 0; it < 60; ++it) {
    bool finite = true;
    for (int i = 0; i < N; ++i) {
      ws.fu[i] = nl.f(uw[i]);
      double fp = nl.f_prime(uw[i]);
      if (!std::isfinite(ws.fu[i]) || !std::isfinite(fp)) { finite = false; break; }
      sub[i] = op.sub[i];
      sup[i] = op.super[i];
      dia[i] = op.diag[i] - lw * fp;
    }
    if (!finite) return false;
    op.apply(uw, ws.res);
    for (int i = 0; i < N; ++i) ws.res[i] = -(ws.res[i] - lw * ws.fu[i]);
    try {
      lu.factor(sub, dia, sup);
    } catch (const SingularJacobian&) {
      return false;
    }
    lu.solve(ws.fu, a);   // J a = f(u)
    lu.solve(ws.res, b);  // J b = -res
    if (!std::isfinite(a[0]) || !std::isfinite(b[0]) || a[0] == 0.0) return false;
    double dlam = (-(uw[0] - M) - b[0]) / a[0];
    double nd = 0.0, umax = 0.0;
    for (int i = 0; i < N; ++i) {
      double d = b[i] + dlam * a[i];
      uw[i] += d;
      nd = std::max(nd, std::abs(d));
      umax = std::max(umax, std::abs(uw[i]));
    }
    lw += dlam;
    if (!std::isfinite(lw) || !within_guard(uw, guard)) return false;
    if (nd <= 1e-12 * (1.0 + umax) && std::abs(uw[0] - M) <= 1e-12 * std::max(1.0, M)) {
      if (scaled_residual(op, nl, lw, uw, tol, ws) <= 10.0 * tol && lw > 0) {
        u = std::move(uw);
        lambda = lw;
        return true;
      }
      return false;
    }
  }
  return false;
}

} // namespace

bool solve_at_height(const DiscreteOperator& op, const Nonlinearity& nl,
                     std::vector<double>& u, double& lambda, double M, double tol,
                     double sup_guard) {
  Workspace ws(op.n_points);
  return solve_at_height_impl(op, nl, u, lambda, M, tol, sup_guard, ws);
}

std::vector<double> newton_solve(const DiscreteOperator& op, const Nonlinearity& nl,
                                 double lambda, std::span<const double> u0,
                                 const NewtonOptions& opts, int* iters_out) {
  if (!(opts.tol > 0)) throw DomainError("newton_solve: tol must be positive");
  const int N = op.n_points;
  std::vector<double> u(u0.begin(), u0.end());
  if (static_cast<int>(u.size()) != N) throw DomainError("newton_solve: size mismatch");
  for (double x : u)
    if (!std::isfinite(x)) throw DomainError("newton_solve: u0 must be finite");
  Workspace ws(N);
  // surface a hard singular Jacobian distinctly from plain stalling
  {
    std::vector<double> sub(N), dia(N), sup(N);
    for (int i = 0; i < N; ++i) {
      sub[i] = op.sub[i];
      sup[i] = op.super[i];
      dia[i] = op.diag[i] - lambda * nl.f_prime(u[i]);
    }
    TridiagonalSolver lu;
    lu.factor(sub, dia, sup); // throws SingularJacobian
  }
  int iters = 0;
  if (!newton_try(op, nl, lambda, u, opts.tol, opts.max_iter, opts.sup_guard, iters, ws))
    throw NoConvergence("newton_solve: no convergence within max_iter");
  if (iters_out) *iters_out = iters;
  return u;
}

std::vector<double> newton_solve(const RiemannianModel& model, const RadialMesh& mesh,
                                 const Nonlinearity& nl, double lambda,
                                 std::span<const double> u0, double tol, int max_iter) {
  DiscreteOperator op = assemble_laplacian(model, mesh);
  NewtonOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  opts.sup_guard = nl.sup_guard;
  return newton_solve(op, nl, lambda, u0, opts);
}

std::vector<double> monotone_iteration(const RiemannianModel& model, const RadialMesh& mesh,
                                       const Nonlinearity& nl, double lambda, double tol,
                                       int max_iter) {
  if (!(tol > 0)) throw DomainError("monotone_iteration: tol must be positive");
  DiscreteOperator op = assemble_laplacian(model, mesh);
  const int N = op.n_points;
  TridiagonalSolver lu;
  lu.factor(op.sub, op.diag, op.super);
  Workspace ws(N);
  std::vector<double> u(N, 0.0), rhs(N), next(N);
  for (int it = 0; it < max_iter; ++it) {
    if (scaled_residual(op, nl, lambda, u, tol, ws) <= tol) return u;
    for (int i = 0; i < N; ++i) {
      rhs[i] = lambda * nl.f(u[i]);
      if (!std::isfinite(rhs[i]))
        throw NoConvergence("monotone_iteration: f(u) overflowed");
    }
    lu.solve(rhs, next);
    std::swap(u, next);
    if (!within_guard(u, nl.sup_guard))
      throw NoConvergence("monotone_iteration: iterate exceeded the overflow guard");
  }
  throw NoConvergence("monotone_iteration: no convergence within max_iter");
}

Branch continue_branch(const RiemannianModel& model, const RadialMesh& mesh,
                       const Nonlinearity& nl, const ContinuationOptions& opts) {
  DiscreteOperator op = assemble_laplacian(model, mesh);
  const int N = op.n_points;
  Workspace ws(N);
  const double step0 = opts.lambda_step0 > 0 ? opts.lambda_step0 : 0.05 * model.dim;
  const double tol = opts.newton_tol;
  const double guard = nl.sup_guard;

  Branch branch;
  auto lambda1_of = [&](double lam, std::span<const double> u) {
    return principal_eigenvalue(model, mesh, nl, lam, u, opts.eig_tol).lambda1;
  };
  auto record = [&](double lam, const std::vector<double>& u, int iters, double lam1) {
    BranchPoint p;
    p.lambda = lam;
    p.u = u;
    p.sup_u = *std::max_element(u.begin(), u.end());
    p.l1_norm = weighted_lp_norm(model, mesh, u, 1.0);
    p.lambda1 = lam1;
    p.newton_iters = iters;
    branch.points.push_back(std::move(p));
  };

  std::vector<double> u(N, 0.0);
  double lam_ok = 0.0;
  double lam_fail = std::numeric_limits<double>::infinity();
  double step = step0;
  int attempts = 0;

  // phase A: natural march, previous solution as predictor
  while (step >= 1e-8 * std::max(lam_ok, step0)) {
    if (++attempts > opts.max_points) break;
    double lam_try = lam_ok + step;
    std::vector<double> utry = u;
    int iters = 0;
    bool ok = newton_try(op, nl, lam_try, utry, tol, opts.newton_max_iter, guard, iters, ws) &&
              positive_and_decreasing(utry) && pointwise_above(utry, u);
    if (ok) {
      double lam1 = opts.compute_lambda1 ? lambda1_of(lam_try, utry)
                                         : std::numeric_limits<double>::quiet_NaN();
      record(lam_try, utry, iters, lam1);
      u = std::move(utry);
      lam_ok = lam_try;
      if (iters <= 8) step = std::min(step * 1.3, 2.0 * step0);
    } else {
      lam_fail = lam_try;
      step *= 0.5;
    }
  }
  if (branch.points.empty()) {
    branch.fold_bracket = {0.0, std::isfinite(lam_fail) ? lam_fail : 0.0};
    branch.lambda_star_estimate = 0.0;
    return branch;
  }
  if (!std::isfinite(lam_fail)) lam_fail = lam_ok + 2.0 * step;

  // phase B: bisection refinement of the fold bracket, Euler predictor
  double lam1_prev = lambda1_of(lam_ok, u);
  if (std::isnan(branch.points.back().lambda1) && opts.compute_lambda1)
    branch.points.back().lambda1 = lam1_prev;
  {
    TridiagonalSolver lu;
    std::vector<double> sub(N), dia(N), sup(N), tang(N), fu(N);
    for (int k = 0; k < opts.fold_bisection_iters; ++k) {
      double lam_mid = 0.5 * (lam_ok + lam_fail);
      if (!(lam_ok < lam_mid && lam_mid < lam_fail)) break;
      std::vector<double> utry = u;
      bool predicted = true;
      try {
        for (int i = 0; i < N; ++i) {
          fu[i] = nl.f(u[i]);
          sub[i] = op.sub[i];
          sup[i] = op.super[i];
          dia[i] = op.diag[i] - lam_ok * nl.f_prime(u[i]);
        }
        lu.factor(sub, dia, sup);
        lu.solve(fu, tang); // du/dlam at (lam_ok, u)
      } catch (const SingularJacobian&) {
        predicted = false;
      }
      if (predicted) {
        for (int i = 0; i < N; ++i) utry[i] = u[i] + (lam_mid - lam_ok) * tang[i];
        if (!within_guard(utry, guard)) utry = u;
      }
      int iters = 0;
      bool ok = newton_try(op, nl, lam_mid, utry, tol, 2 * opts.newton_max_iter, guard, iters,
                           ws) &&
                positive_and_decreasing(utry) && pointwise_above(utry, u);
      double lam1 = std::numeric_limits<double>::quiet_NaN();
      if (ok) {
        lam1 = lambda1_of(lam_mid, utry);
        ok = lam1 >= -1e-8 && lam1 <= lam1_prev + 1e-8;
      }
      if (ok) {
        record(lam_mid, utry, iters, lam1);
        u = std::move(utry);
        lam_ok = lam_mid;
        lam1_prev = lam1;
      } else {
        lam_fail = lam_mid;
      }
    }
  }

  // phase C: the fold tail is nearly vertical in lambda for n >= 10 (the
  // remaining climb spans less than one ulp of lambda), so polish toward the
  // fold in the height u(r_0), lambda free, staying on the semistable side
  if (opts.fold_polish) {
    double M = u[0];
    double dM = std::max(0.05, 0.01 * M);
    double lam_cur = lam_ok;
    int trials = 0;
    std::vector<BranchPoint> polish;
    while (dM >= 1e-3 && trials < 200) {
      ++trials;
      std::vector<double> utry = u;
      double ltry = lam_cur;
      bool ok = solve_at_height_impl(op, nl, utry, ltry, M + dM, tol, guard, ws);
      double lam1 = std::numeric_limits<double>::quiet_NaN();
      if (ok) {
        ok = positive_and_decreasing(utry) && pointwise_above(utry, u) &&
             ltry >= lam_cur - 1e-9 * std::max(1.0, lam_cur);
      }
      if (ok) {
        lam1 = lambda1_of(ltry, utry);
        ok = lam1 >= -1e-8 && lam1 <= lam1_prev + 1e-8;
      }
      if (ok) {
        BranchPoint p;
        p.lambda = ltry;
        p.u = utry;
        p.sup_u = *std::max_element(utry.begin(), utry.end());
        p.l1_norm = weighted_lp_norm(model, mesh, utry, 1.0);
        p.lambda1 = lam1;
        p.newton_iters = 0;
        polish.push_back(std::move(p));
        u = std::move(utry);
        lam_cur = ltry;
        lam1_prev = lam1;
        M += dM;
      } else {
        dM *= 0.5;
      }
    }
    // splice keeping lambda strictly increasing; deepest point wins ties
    for (auto& p : polish) {
      while (!branch.points.empty() && branch.points.back().lambda >= p.lambda)
        branch.points.pop_back();
      branch.points.push_back(std::move(p));
    }
    lam_ok = std::max(lam_ok, lam_cur);
    lam_fail = std::max(lam_fail, std::nextafter(lam_ok, std::numeric_limits<double>::infinity()));
  }

  branch.fold_bracket = {lam_ok, lam_fail};
  branch.lambda_star_estimate = 0.5 * (lam_ok + lam_fail);
  return branch;
}

namespace {
std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}
} // namespace

void write_branch_csv(const Branch& branch, std::ostream& os) {
  os << "lambda,sup_u,l1_norm,lambda1,newton_iters\n";
  for (const auto& p : branch.points) {
    os << fmt9(p.lambda) << ',' << fmt9(p.sup_u) << ',' << fmt9(p.l1_norm) << ','
       << fmt9(p.lambda1) << ',' << p.newton_iters << '\n';
  }
  os << "# lambda_star_estimate=" << fmt9(branch.lambda_star_estimate) << '\n';
}

std::string branch_csv(const Branch& branch) {
  std::ostringstream os;
  write_branch_csv(branch, os);
  return os.str();
}

BranchCsv parse_branch_csv(std::istream& is) {
  BranchCsv out;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("lambda_star_estimate=");
      if (pos != std::string::npos)
        out.lambda_star_estimate = std::strtod(line.c_str() + pos + 21, nullptr);
      continue;
    }
    if (header) {
      header = false;
      continue;
    }
    BranchCsvRow row{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%d", &row.lambda, &row.sup_u, &row.l1_norm,
                    &row.lambda1, &row.newton_iters) == 5)
      out.rows.push_back(row);
  }
  return out;
}

} // namespace gelfand
