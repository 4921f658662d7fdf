#include "gelfand/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "gelfand/errors.hpp"
#include "gelfand/norms.hpp"

namespace gelfand {

namespace {

std::string fmt9(double v) {
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  if (std::isnan(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

bool exp_family(NonlinearityKind k) {
  return k == NonlinearityKind::ExpModel || k == NonlinearityKind::GelfandClassic;
}
bool power_family(NonlinearityKind k) {
  return k == NonlinearityKind::PowerModel || k == NonlinearityKind::PowerClassic;
}

} // namespace

RegularityExponents regularity_exponents(int n, std::optional<double> m) {
  if (n < 2) throw DomainError("regularity_exponents: requires n >= 2");
  RegularityExponents e;
  const double inf = std::numeric_limits<double>::infinity();
  double root = 2.0 * std::sqrt(n - 1.0);
  double d0 = n - root - 4.0;
  double d1 = n - root - 2.0;
  e.p0 = d0 > 0 ? 2.0 * n / d0 : inf;
  e.p1 = d1 > 0 ? 2.0 * n / d1 : inf;
  if (m) {
    if (!(*m > 1)) throw DomainError("regularity_exponents: requires m > 1");
    double a = *m / (*m - 1.0);
    e.n_m = 2.0 + 4.0 * a + 4.0 * std::sqrt(a);
  }
  return e;
}

ClosedFormExtremal closed_form_extremal(const RiemannianModel& model, NonlinearityKind family,
                                        std::optional<double> m) {
  if (!model.curvature)
    throw DomainError("closed_form_extremal: requires a space form");
  const double n = model.dim;
  const double R = model.radius;
  auto psi = model.psi;
  const double psi_R = psi(R);

  ClosedFormExtremal cf;
  if (exp_family(family)) {
    if (model.dim < 10)
      throw HypothesisError("exponential family: closed form requires n >= 10, got n=" +
                            std::to_string(model.dim));
    if (model.kind == SpaceForm::Elliptic) {
      auto cr = critical_radii(model);
      if (!(R < std::min(cr.r0, cr.re)))
        throw HypothesisError("exponential family: elliptic radius must satisfy R < min(R0, Re)");
    }
    cf.family = NonlinearityKind::ExpModel;
    cf.lambda_star = 2.0 * (n - 2.0);
    cf.u_star = [psi, psi_R](double r) { return -2.0 * std::log(psi(r) / psi_R); };
  } else if (power_family(family)) {
    if (!m) throw DomainError("power family: exponent m required");
    double nm = regularity_exponents(model.dim, m).n_m;
    if (!(n >= nm))
      throw HypothesisError("power family: closed form requires n >= N(m)=" + std::to_string(nm) +
                            ", got n=" + std::to_string(model.dim));
    if (model.kind == SpaceForm::Elliptic) {
      auto cr = critical_radii(model);
      if (!(R < std::min(cr.r0, cr.rp)))
        throw HypothesisError("power family: elliptic radius must satisfy R < min(R0, Rp)");
    }
    double theta = 2.0 / (*m - 1.0);
    cf.family = NonlinearityKind::PowerModel;
    cf.theta = theta;
    cf.lambda_star = theta * (n - theta * *m); // (2/(m-1)) (n - 2m/(m-1))
    double shift = std::pow(psi_R, -theta);
    cf.u_star = [psi, theta, shift](double r) { return std::pow(psi(r), -theta) - shift; };
  } else {
    throw DomainError("closed_form_extremal: no closed form for this nonlinearity kind");
  }
  return cf;
}

double extremal_strong_residual(const RiemannianModel& model, const ClosedFormExtremal& cf,
                                const Nonlinearity& nl, double r) {
  double p = model.psi(r), dp = model.psi_prime(r), ddp = model.psi_second(r);
  double ur, urr;
  if (cf.family == NonlinearityKind::ExpModel) {
    ur = -2.0 * dp / p;
    urr = -2.0 * ddp / p + 2.0 * dp * dp / (p * p);
  } else {
    double th = cf.theta;
    ur = -th * std::pow(p, -th - 1.0) * dp;
    urr = th * (th + 1.0) * std::pow(p, -th - 2.0) * dp * dp - th * std::pow(p, -th - 1.0) * ddp;
  }
  double lap = urr + (model.dim - 1.0) * dp / p * ur;
  return -lap - cf.lambda_star * nl.f(cf.u_star(r));
}

std::string to_json(const ExtremalReport& report) {
  std::ostringstream os;
  os << "{\n"
     << "  \"lambda_star_numeric\": " << fmt9(report.lambda_star_numeric) << ",\n"
     << "  \"lambda_star_closed\": " << fmt9(report.lambda_star_closed) << ",\n"
     << "  \"max_pointwise_gap\": " << fmt9(report.max_pointwise_gap) << ",\n"
     << "  \"weak_residual_of_closed_form\": " << fmt9(report.weak_residual_of_closed_form)
     << ",\n"
     << "  \"exponents\": {\"p0\": " << fmt9(report.exponents.p0)
     << ", \"p1\": " << fmt9(report.exponents.p1) << ", \"N_m\": " << fmt9(report.exponents.n_m)
     << "}\n"
     << "}\n";
  return os.str();
}

ExtremalReport verify_extremal(const RiemannianModel& model, const Nonlinearity& nl,
                               std::span<const int> mesh_ladder,
                               const ContinuationOptions& opts, int jobs) {
  if (mesh_ladder.empty()) throw DomainError("verify_extremal: empty mesh ladder");
  for (size_t i = 0; i + 1 < mesh_ladder.size(); ++i)
    if (mesh_ladder[i] >= mesh_ladder[i + 1])
      throw DomainError("verify_extremal: ladder must be strictly increasing");

  std::optional<double> m;
  if (power_family(nl.kind)) m = nl.m;
  if (std::abs(nl.psi_R - model.psi(model.radius)) > 1e-12 * (1.0 + std::abs(nl.psi_R)) ||
      (model.curvature && nl.curvature != *model.curvature))
    throw DomainError("verify_extremal: nonlinearity was built for a different geometry");
  ClosedFormExtremal cf = closed_form_extremal(model, nl.kind, m);

  ExtremalReport rep;
  rep.lambda_star_closed = cf.lambda_star;
  rep.exponents = regularity_exponents(model.dim, m);

  const size_t L = mesh_ladder.size();
  rep.ladder.assign(mesh_ladder.begin(), mesh_ladder.end());
  rep.lambda_star_ladder.assign(L, 0.0);
  rep.gap_ladder.assign(L, 0.0);
  rep.weak_residual_ladder.assign(L, 0.0);
  std::vector<std::string> errors(L);

  auto run_one = [&](size_t k) {
    try {
      int N = mesh_ladder[k];
      RadialMesh mesh = RadialMesh::uniform(model.radius, N);
      Branch br = continue_branch(model, mesh, nl, opts);
      if (br.points.empty())
        throw NoConvergence("verify_extremal: continuation produced no points at N=" +
                            std::to_string(N));
      rep.lambda_star_ladder[k] = br.lambda_star_estimate;
      const auto& last = br.points.back();
      double gap = 0.0;
      for (int i = 0; i < mesh.n_points; ++i) {
        double r = mesh.node(i);
        if (r < model.radius / 4.0) continue;
        gap = std::max(gap, std::abs(last.u[i] - cf.u_star(r)));
      }
      rep.gap_ladder[k] = gap;
      std::vector<double> ustar(mesh.n_points);
      for (int i = 0; i < mesh.n_points; ++i) ustar[i] = cf.u_star(mesh.node(i));
      rep.weak_residual_ladder[k] = weak_residual(model, mesh, ustar, cf.lambda_star, nl, 4);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  };

  if (jobs <= 1) {
    for (size_t k = 0; k < L; ++k) run_one(k);
  } else {
    const size_t batch = static_cast<size_t>(jobs);
    for (size_t base = 0; base < L; base += batch) {
      std::vector<std::thread> pool;
      for (size_t k = base; k < std::min(L, base + batch); ++k)
        pool.emplace_back(run_one, k);
      for (auto& t : pool) t.join();
    }
  }
  for (const auto& err : errors)
    if (!err.empty()) throw NoConvergence(err);

  rep.lambda_star_numeric = rep.lambda_star_ladder.back();
  rep.max_pointwise_gap = rep.gap_ladder.back();
  rep.weak_residual_of_closed_form = rep.weak_residual_ladder.back();

  if (std::abs(rep.lambda_star_numeric - cf.lambda_star) > 0.02 * cf.lambda_star)
    throw ReportFailure("verify_extremal: numeric lambda* outside the 2% band", rep);
  return rep;
}

namespace {

struct HardyMargins {
  double hardy, hardy_lhs, poincare, poincare_lhs;
};

HardyMargins hardy_margins_impl(const RiemannianModel& model, const RadialMesh& mesh,
                                std::span<const double> xi) {
  const int N = mesh.n_points;
  const double h = mesh.h;
  const double n = model.dim;
  const double H = hardy_constant(model);
  const double sup_ratio = sup_phi_over_psi(model);

  double lhs = 0.0;
  for (int k = 1; k <= N; ++k) {
    double xi_hi = (k < N) ? xi[k] : 0.0;
    double d = (xi_hi - xi[k - 1]) / h;
    lhs += std::pow(model.psi(mesh.face(k)), n - 1.0) * d * d;
  }
  lhs *= h;
  double rhs = 0.0;
  for (int i = 0; i < N; ++i) {
    double p = model.psi(mesh.node(i));
    double pw = std::pow(p, n - 1.0);
    rhs += pw * xi[i] * xi[i] * ((n - 2.0) * (n - 2.0) / (4.0 * p * p) + H);
  }
  rhs *= h;

  // Poincare step on vphi = xi psi^{n/2-1}
  std::vector<double> vphi(N);
  for (int i = 0; i < N; ++i)
    vphi[i] = xi[i] * std::pow(model.psi(mesh.node(i)), 0.5 * n - 1.0);
  double pl = 0.0, pr = 0.0;
  for (int k = 1; k <= N; ++k) {
    double hi = (k < N) ? vphi[k] : 0.0;
    double d = (hi - vphi[k - 1]) / h;
    pl += model.psi(mesh.face(k)) * d * d;
  }
  for (int i = 0; i < N; ++i) pr += model.psi(mesh.node(i)) * vphi[i] * vphi[i];
  pl *= h;
  pr *= h;
  return {lhs - rhs, lhs, pl - 0.25 / (sup_ratio * sup_ratio) * pr, pl};
}

} // namespace

std::pair<double, double> hardy_margin(const RiemannianModel& model, const RadialMesh& mesh,
                                       std::span<const double> xi) {
  auto m = hardy_margins_impl(model, mesh, xi);
  return {m.hardy, m.poincare};
}

HardyReport hardy_verify(const RiemannianModel& model, int trials, unsigned long long seed,
                         int mesh_points) {
  if (model.dim < 3) throw DomainError("hardy_verify: requires n >= 3");
  if (model.kind != SpaceForm::Hyperbolic && model.kind != SpaceForm::Elliptic)
    throw DomainError("hardy_verify: proposition covers psi in {sinh, sin}");
  if (model.kind == SpaceForm::Elliptic) {
    double r0 = critical_radii(model).r0;
    if (!(model.radius < r0))
      throw HypothesisError("hardy_verify: positive-H claim needs R < R0=" + std::to_string(r0));
  }
  if (trials < 1) throw DomainError("hardy_verify: trials must be positive");

  RadialMesh mesh = RadialMesh::uniform(model.radius, mesh_points);
  const int N = mesh.n_points;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif01(0.0, 1.0);

  HardyReport rep;
  rep.h_constant = hardy_constant(model);
  rep.trials = trials;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.worst_margin_rel = std::numeric_limits<double>::infinity();
  rep.worst_poincare_margin = std::numeric_limits<double>::infinity();
  rep.worst_poincare_rel = std::numeric_limits<double>::infinity();

  const int knots = 16;
  std::vector<double> kx(knots + 2), kv(knots + 2), xi(N);
  for (int t = 0; t < trials; ++t) {
    for (int j = 0; j < knots; ++j) kx[j + 1] = model.radius * unif01(rng);
    std::sort(kx.begin() + 1, kx.end() - 1);
    for (int j = 0; j < knots; ++j) kv[j + 1] = 2.0 * unif01(rng) - 1.0;
    kx[0] = 0.0;
    kv[0] = kv[1]; // plateau on [0, r_1]
    kx[knots + 1] = model.radius;
    kv[knots + 1] = 0.0; // xi(R) = 0
    size_t seg = 0;
    for (int i = 0; i < N; ++i) {
      double r = mesh.node(i);
      while (seg + 2 < kx.size() && kx[seg + 1] < r) ++seg;
      double t01 = (r - kx[seg]) / std::max(kx[seg + 1] - kx[seg], 1e-300);
      xi[i] = kv[seg] + (kv[seg + 1] - kv[seg]) * std::clamp(t01, 0.0, 1.0);
    }
    auto mg = hardy_margins_impl(model, mesh, xi);
    rep.worst_margin = std::min(rep.worst_margin, mg.hardy);
    rep.worst_margin_rel =
        std::min(rep.worst_margin_rel, mg.hardy / std::max(mg.hardy_lhs, 1e-300));
    rep.worst_poincare_margin = std::min(rep.worst_poincare_margin, mg.poincare);
    rep.worst_poincare_rel =
        std::min(rep.worst_poincare_rel, mg.poincare / std::max(mg.poincare_lhs, 1e-300));
  }
  return rep;
}

PowerStabilityConditions power_semistability_conditions(const RiemannianModel& model, double m) {
  const double n = model.dim;
  if (!(m > (n + 2.0) / (n - 2.0)))
    throw DomainError("power_semistability_conditions: requires m > (n+2)/(n-2)");
  PowerStabilityConditions c;
  double lam_sharp = 2.0 / (m - 1.0) * (n - 2.0 * m / (m - 1.0));
  c.lhs1 = (n - 2.0) * (n - 2.0) / 4.0;
  c.rhs1 = lam_sharp * m;
  c.cond1 = c.lhs1 >= c.rhs1;
  c.lhs2 = hardy_constant(model);
  c.rhs2 = -2.0 / ((m - 1.0) * (m - 1.0)) * ((m - 1.0) * n - (m + 1.0)) *
           static_cast<double>(*model.curvature);
  c.cond2 = c.lhs2 >= c.rhs2;
  return c;
}

std::vector<double> membership_p_grid(double boundary, int count, double lo_factor,
                                      double hi_factor) {
  if (count < 2 || !(boundary > 0)) throw DomainError("membership_p_grid: invalid parameters");
  std::vector<double> grid(count);
  double lo = std::log(lo_factor * boundary), hi = std::log(hi_factor * boundary);
  for (int i = 0; i < count; ++i)
    grid[i] = std::exp(lo + (hi - lo) * i / (count - 1));
  return grid;
}

std::vector<MembershipRow> lp_membership_scan(const RiemannianModel& model,
                                              const std::function<double(double)>& u_star,
                                              std::span<const double> p_grid,
                                              std::span<const int> mesh_ladder) {
  if (mesh_ladder.size() < 2)
    throw DomainError("lp_membership_scan: ladder needs at least two meshes");
  std::vector<MembershipRow> rows;
  rows.reserve(p_grid.size());

  std::vector<RadialMesh> meshes;
  std::vector<std::vector<double>> samples;
  for (int N : mesh_ladder) {
    RadialMesh mesh = RadialMesh::uniform(model.radius, N);
    std::vector<double> u(mesh.n_points);
    for (int i = 0; i < mesh.n_points; ++i) u[i] = u_star(mesh.node(i));
    meshes.push_back(std::move(mesh));
    samples.push_back(std::move(u));
  }
  double log_h_span = std::log(meshes.front().h) - std::log(meshes.back().h);

  for (double p : p_grid) {
    MembershipRow row;
    row.p = p;
    std::vector<double> lp, w1p;
    for (size_t k = 0; k < meshes.size(); ++k) {
      lp.push_back(weighted_lp_norm(model, meshes[k], samples[k], p));
      w1p.push_back(weighted_w1p_seminorm(model, meshes[k], samples[k], p));
    }
    row.lp_norm = lp.back();
    row.w1p_seminorm = w1p.back();
    row.lp_slope = (std::log(lp.back()) - std::log(lp.front())) / log_h_span;
    row.w1p_slope = (std::log(w1p.back()) - std::log(w1p.front())) / log_h_span;
    row.lp_member = std::abs(row.lp_slope) < kMembershipSlopeThreshold;
    row.w1p_member = std::abs(row.w1p_slope) < kMembershipSlopeThreshold;
    rows.push_back(row);
  }
  return rows;
}

} // namespace gelfand
