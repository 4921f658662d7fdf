// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Criteria run against the four branch cases (hyperbolic and
// Euclidean exponential n=10, hyperbolic power m=3 n=13, elliptic
// exponential n=10 R=0.2) plus the inequality and exponent checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gelfand/analysis.hpp"
#include "gelfand/errors.hpp"
#include "gelfand/norms.hpp"
#include "gelfand/solver.hpp"
#include "gelfand/stability.hpp"

using namespace gelfand;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct BranchCase {
  std::string name;
  RiemannianModel model;
  Nonlinearity nl;
  double lambda_star_closed;
  Branch branch; // lambda1-instrumented run at N = 1024
};

double fitted_order(const std::vector<int>& ladder, const std::vector<double>& err) {
  // log-log slope between the coarsest and finest rungs
  double h0 = 1.0 / (ladder.front() + 0.5);
  double h1 = 1.0 / (ladder.back() + 0.5);
  return (std::log(err.front()) - std::log(err.back())) / (std::log(h0) - std::log(h1));
}

} // namespace

int main() {
  const std::vector<int> full_ladder = {512, 1024, 2048, 4096};
  const std::vector<int> mid_ladder = {512, 1024, 2048};

  // ---- shared branch data (lambda1 on) at N = 1024
  std::vector<BranchCase> cases;
  {
    auto hyp10 = make_space_form(SpaceForm::Hyperbolic, 10, 1.0);
    cases.push_back({"hyperbolic exp n=10 R=1", hyp10, make_exp_model(hyp10), 16.0, {}});
    auto euc10 = make_space_form(SpaceForm::Euclidean, 10, 1.0);
    cases.push_back({"euclidean gelfand n=10 R=1", euc10, make_gelfand_classic(), 16.0, {}});
    auto hyp13 = make_space_form(SpaceForm::Hyperbolic, 13, 1.0);
    cases.push_back({"hyperbolic power m=3 n=13 R=1", hyp13, make_power_model(hyp13, 3.0),
                     10.0, {}});
    auto ell10 = make_space_form(SpaceForm::Elliptic, 10, 0.2);
    cases.push_back({"elliptic exp n=10 R=0.2", ell10, make_exp_model(ell10), 16.0, {}});
    for (auto& c : cases) {
      RadialMesh mesh = RadialMesh::uniform(c.model.radius, 1024);
      ContinuationOptions opts;
      opts.compute_lambda1 = true;
      c.branch = continue_branch(c.model, mesh, c.nl, opts);
    }
  }

  // ---- criterion 1: hyperbolic exponential ladder up to 4096, < 60 s
  ExtremalReport rep_hyp;
  {
    bool pass = false;
    std::string detail;
    auto t0 = std::chrono::steady_clock::now();
    try {
      rep_hyp = verify_extremal(cases[0].model, cases[0].nl, full_ladder);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      double rel = std::abs(rep_hyp.lambda_star_numeric - 16.0) / 16.0;
      pass = rel <= 0.02 && secs < 60.0;
      detail = "lambda*=" + fmt(rep_hyp.lambda_star_numeric) + " rel=" + fmt(rel) +
               " time=" + fmt(secs) + "s";
    } catch (const std::exception& e) {
      detail = e.what();
    }
    report(1, "extremal parameter, hyperbolic exponential", pass, detail);
  }

  // ---- criterion 2: euclidean Gelfand; gap to u* decreasing at order >= 1
  ExtremalReport rep_euc;
  {
    bool pass = false;
    std::string detail;
    try {
      rep_euc = verify_extremal(cases[1].model, cases[1].nl, full_ladder);
      double rel = std::abs(rep_euc.lambda_star_numeric - 16.0) / 16.0;
      bool decreasing = true;
      for (size_t k = 0; k + 1 < rep_euc.gap_ladder.size(); ++k)
        decreasing = decreasing && rep_euc.gap_ladder[k + 1] < rep_euc.gap_ladder[k];
      double order = fitted_order(rep_euc.ladder, rep_euc.gap_ladder);
      pass = rel <= 0.02 && decreasing && order >= 1.0;
      detail = "lambda*=" + fmt(rep_euc.lambda_star_numeric) + " gap_order=" + fmt(order);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    report(2, "extremal parameter, euclidean Gelfand", pass, detail);
  }

  // ---- criterion 3: hyperbolic power m=3 n=13
  ExtremalReport rep_pow;
  {
    bool pass = false;
    std::string detail;
    try {
      rep_pow = verify_extremal(cases[2].model, cases[2].nl, mid_ladder);
      double rel = std::abs(rep_pow.lambda_star_numeric - 10.0) / 10.0;
      pass = rel <= 0.02;
      detail = "lambda*=" + fmt(rep_pow.lambda_star_numeric) + " rel=" + fmt(rel);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    report(3, "extremal parameter, hyperbolic power", pass, detail);
  }

  // ---- criterion 4: elliptic exponential R=0.2; R=0.3 must violate
  ExtremalReport rep_ell;
  {
    bool pass = false;
    std::string detail;
    try {
      rep_ell = verify_extremal(cases[3].model, cases[3].nl, mid_ladder);
      double rel = std::abs(rep_ell.lambda_star_numeric - 16.0) / 16.0;
      bool rejected = false;
      try {
        auto bad = make_space_form(SpaceForm::Elliptic, 10, 0.3);
        closed_form_extremal(bad, NonlinearityKind::ExpModel);
      } catch (const HypothesisError&) {
        rejected = true;
      }
      pass = rel <= 0.02 && rejected;
      detail = "lambda*=" + fmt(rep_ell.lambda_star_numeric) +
               " R=0.3 rejected=" + (rejected ? "yes" : "no");
    } catch (const std::exception& e) {
      detail = e.what();
    }
    report(4, "extremal parameter, elliptic exponential", pass, detail);
  }

  // ---- criterion 5: closed-form residual identity + weak-residual decay
  {
    bool pass = true;
    std::string detail;
    std::mt19937_64 rng(2024);
    struct C5 {
      SpaceForm kind;
      int n;
      double R;
      NonlinearityKind fam;
      double m;
    };
    std::vector<C5> matrix = {
        {SpaceForm::Hyperbolic, 10, 1.0, NonlinearityKind::ExpModel, 0},
        {SpaceForm::Euclidean, 10, 1.0, NonlinearityKind::ExpModel, 0},
        {SpaceForm::Elliptic, 10, 0.2, NonlinearityKind::ExpModel, 0},
        {SpaceForm::Hyperbolic, 13, 1.0, NonlinearityKind::PowerModel, 3.0},
        {SpaceForm::Euclidean, 13, 1.0, NonlinearityKind::PowerModel, 3.0},
        {SpaceForm::Elliptic, 13, 0.15, NonlinearityKind::PowerModel, 3.0},
    };
    double worst_res = 0, worst_order = 1e300;
    try {
      for (const auto& c : matrix) {
        auto model = make_space_form(c.kind, c.n, c.R);
        std::optional<double> m;
        if (c.fam == NonlinearityKind::PowerModel) m = c.m;
        auto cf = closed_form_extremal(model, c.fam, m);
        auto nl = m ? make_power_model(model, c.m) : make_exp_model(model);
        std::uniform_real_distribution<double> unif(0.02 * c.R, c.R);
        for (int t = 0; t < 100; ++t) {
          double r = unif(rng);
          double res = std::abs(extremal_strong_residual(model, cf, nl, r));
          double scale = std::abs(cf.lambda_star * nl.f(cf.u_star(r)));
          worst_res = std::max(worst_res, res / scale);
          if (res > 1e-9 * scale) pass = false;
        }
        std::vector<double> wres;
        for (int N : mid_ladder) {
          RadialMesh mesh = RadialMesh::uniform(c.R, N);
          std::vector<double> us(mesh.n_points);
          for (int i = 0; i < mesh.n_points; ++i) us[i] = cf.u_star(mesh.node(i));
          wres.push_back(weak_residual(model, mesh, us, cf.lambda_star, nl, 4));
        }
        double order = fitted_order(mid_ladder, wres);
        worst_order = std::min(worst_order, order);
        if (order < 1.0) pass = false;
      }
      detail = "max |res|/scale=" + fmt(worst_res) + " min weak order=" + fmt(worst_order);
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    report(5, "closed-form residual identity", pass, detail);
  }

  // ---- criterion 6: Hardy inequality on a 12-case matrix
  {
    bool pass = true;
    std::string detail;
    struct C6 {
      SpaceForm kind;
      int n;
      double R;
    };
    std::vector<C6> matrix = {
        {SpaceForm::Hyperbolic, 3, 0.5},  {SpaceForm::Hyperbolic, 3, 1.0},
        {SpaceForm::Hyperbolic, 3, 2.0},  {SpaceForm::Hyperbolic, 5, 1.0},
        {SpaceForm::Hyperbolic, 7, 1.5},  {SpaceForm::Hyperbolic, 10, 1.0},
        {SpaceForm::Hyperbolic, 10, 2.0}, {SpaceForm::Hyperbolic, 12, 0.7},
        {SpaceForm::Elliptic, 3, 0.8},    {SpaceForm::Elliptic, 5, 0.5},
        {SpaceForm::Elliptic, 10, 0.2},   {SpaceForm::Elliptic, 13, 0.15},
    };
    double worst = 1e300, worst_h_gap = 0;
    try {
      for (const auto& c : matrix) {
        auto model = make_space_form(c.kind, c.n, c.R);
        auto rep = hardy_verify(model, 200, 0, 2048);
        worst = std::min(worst, rep.worst_margin_rel);
        if (rep.worst_margin_rel < -1e-8) pass = false;
        // closed-form cross-check of H
        double closed;
        if (c.kind == SpaceForm::Hyperbolic) {
          double s = std::sinh(c.R), ch = std::cosh(c.R);
          closed = 0.25 * (s * s / ((ch - 1) * (ch - 1)) + c.n * (c.n - 2.0));
        } else {
          double s = std::sin(c.R), co = std::cos(c.R);
          closed = 0.25 * (s * s / ((co - 1) * (co - 1)) - c.n * (c.n - 2.0));
        }
        double gap = std::abs(rep.h_constant - closed);
        worst_h_gap = std::max(worst_h_gap, gap);
        if (gap > 1e-10) pass = false;
      }
      detail = "worst rel margin=" + fmt(worst) + " max |H-closed|=" + fmt(worst_h_gap);
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    report(6, "improved weighted Hardy inequality", pass, detail);
  }

  // ---- criteria 7 and 8 on the instrumented branches
  {
    bool pass7 = true, pass8 = true;
    std::string d7, d8;
    for (const auto& c : cases) {
      const auto& pts = c.branch.points;
      if (pts.empty()) {
        pass7 = pass8 = false;
        d7 = d8 = c.name + ": empty branch";
        continue;
      }
      double ls = c.branch.lambda_star_estimate;
      size_t ref = 0;
      double best = 1e300;
      for (size_t k = 0; k < pts.size(); ++k) {
        double d = std::abs(pts[k].lambda - 0.1 * ls);
        if (d < best) {
          best = d;
          ref = k;
        }
      }
      double ratio = pts.back().lambda1 / pts[ref].lambda1;
      if (!(ratio < 0.05)) pass7 = false;
      for (size_t k = 0; k < pts.size(); ++k) {
        if (!(pts[k].lambda1 >= -1e-8)) pass7 = false;
        if (k + 1 < pts.size() && !(pts[k + 1].lambda1 <= pts[k].lambda1 + 1e-8)) pass7 = false;
        const auto& u = pts[k].u;
        double slack = 1e-12 * pts[k].sup_u;
        for (size_t i = 0; i < u.size(); ++i) {
          if (!(u[i] > 0)) pass8 = false;
          if (i + 1 < u.size() && !(u[i + 1] <= u[i] + slack)) pass8 = false;
        }
      }
      d7 += c.name + " ratio=" + fmt(ratio) + "; ";
    }
    report(7, "semistability along branches", pass7, d7);
    report(8, "positivity and radial monotonicity", pass8,
           d8.empty() ? "all accepted points decreasing within 1e-12 sup u" : d8);
  }

  // ---- criterion 9: exponent table
  {
    bool pass = false;
    std::string detail;
    try {
      auto e10 = regularity_exponents(10);
      auto e11 = regularity_exponents(11);
      auto em = regularity_exponents(11, 3.0);
      long double p0o = 22.0L / (11.0L - 2.0L * sqrtl(10.0L) - 4.0L);
      long double nmo = 8.0L + 4.0L * sqrtl(1.5L);
      pass = std::isinf(e10.p0) && std::abs(e10.p1 - 10.0) <= 1e-12 &&
             std::abs(e11.p0 - double(p0o)) <= 1e-6 && std::abs(em.n_m - double(nmo)) <= 1e-6;
      detail = "p0(10)=inf p1(10)=" + fmt(e10.p1) + " p0(11)=" + fmt(e11.p0) +
               " N(3)=" + fmt(em.n_m);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    report(9, "critical exponent table", pass, detail);
  }

  // ---- criterion 10: sharpness scan at 0.9x / 1.1x of the boundaries
  {
    bool pass = false;
    std::string detail;
    try {
      auto model = make_space_form(SpaceForm::Hyperbolic, 13, 1.0);
      double shift = 1.0 / std::sinh(1.0);
      auto ustar = [shift](double r) { return 1.0 / std::sinh(r) - shift; };
      double bl = 13.0 * 2.0 / 2.0;  // n(m-1)/2 = 13
      double bw = 13.0 * 2.0 / 4.0;  // n(m-1)/(m+1) = 6.5
      std::vector<double> ps = {0.9 * bl, 1.1 * bl, 0.9 * bw, 1.1 * bw};
      auto rows = lp_membership_scan(model, ustar, ps, full_ladder);
      pass = rows[0].lp_member && !rows[1].lp_member && rows[2].w1p_member &&
             !rows[3].w1p_member;
      detail = "slopes lp(0.9x)=" + fmt(rows[0].lp_slope) + " lp(1.1x)=" + fmt(rows[1].lp_slope) +
               " w1p(0.9x)=" + fmt(rows[2].w1p_slope) + " w1p(1.1x)=" + fmt(rows[3].w1p_slope);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    report(10, "L^p / W^{1,p} sharpness scan", pass, detail);
  }

  // ---- criterion 11: key-estimate ratio bounded along the branch
  {
    bool pass = true;
    std::string detail;
    try {
      const auto& c = cases[0]; // hyperbolic exponential n = 10
      RadialMesh mesh = RadialMesh::uniform(c.model.radius, 1024);
      double ls = c.branch.lambda_star_estimate;
      double root = std::sqrt(9.0);
      for (double alpha : {1.0, 1.0 + 0.5 * root, 1.0 + 0.9 * root}) {
        double lo = 1e300, hi = 0;
        for (const auto& bp : c.branch.points) {
          if (bp.lambda < 0.1 * ls || bp.lambda > 0.99 * ls) continue;
          double r = key_estimate_ratio(c.model, mesh, bp.u, alpha);
          lo = std::min(lo, r);
          hi = std::max(hi, r);
        }
        double factor = hi / lo;
        detail += "alpha=" + fmt(alpha) + " factor=" + fmt(factor) + "; ";
        if (!(factor < 50.0)) pass = false;
      }
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    report(11, "key-estimate bounded ratio", pass, detail);
  }

  if (failures == 0) std::printf("acceptance: all 11 criteria passed\n");
  else std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return failures;
}
