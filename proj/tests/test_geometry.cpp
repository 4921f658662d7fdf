#include <cmath>
#include <random>

#include <doctest.h>

#include "gelfand/errors.hpp"
#include "gelfand/geometry.hpp"

using namespace gelfand;

namespace {

// oracle: sinh by its Taylor series, independent of std::sinh
double sinh_series(double x) {
  double term = x, sum = x;
  for (int k = 1; k < 40; ++k) {
    term *= x * x / ((2 * k) * (2 * k + 1));
    sum += term;
  }
  return sum;
}

// oracle: composite Simpson quadrature of psi on [0, r]
double quad_oracle(const RiemannianModel& m, double r, int panels = 4096) {
  double h = r / panels;
  double s = m.psi(0.0) + m.psi(r);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * m.psi(i * h);
  return s * h / 3.0;
}

} // namespace

TEST_CASE("space forms: construction and psi values") {
  auto hyp = make_space_form(SpaceForm::Hyperbolic, 10, 1.0);
  CHECK(hyp.psi(1.0) == doctest::Approx(sinh_series(1.0)).epsilon(1e-14));
  CHECK(hyp.psi(1.0) == doctest::Approx(1.1752011936438014).epsilon(1e-14));
  CHECK(*hyp.curvature == -1);

  auto euc = make_space_form(SpaceForm::Euclidean, 3, 1.0);
  CHECK(euc.psi(0.7) == 0.7);
  CHECK(*euc.curvature == 0);

  CHECK_THROWS_AS(make_space_form(SpaceForm::Elliptic, 4, 3.14159265358979323846),
                  DomainError);
  CHECK_THROWS_AS(make_space_form(SpaceForm::Hyperbolic, 1, 1.0), DomainError);
  CHECK_THROWS_AS(make_space_form(SpaceForm::Hyperbolic, 3, -1.0), DomainError);
}

TEST_CASE("structural hypotheses at the pole") {
  for (auto kind : {SpaceForm::Euclidean, SpaceForm::Hyperbolic, SpaceForm::Elliptic}) {
    auto m = make_space_form(kind, 5, kind == SpaceForm::Elliptic ? 1.5 : 2.0);
    CHECK(std::abs(m.psi(0.0)) <= 1e-10);
    CHECK(std::abs(m.psi_prime(0.0) - 1.0) <= 1e-10);
    CHECK(std::abs(m.psi_second(0.0)) <= 1e-10);
  }
}

TEST_CASE("space form identities psi''/psi = -K and (psi')^2 - 1 = -K psi^2") {
  std::mt19937_64 rng(7);
  for (auto kind : {SpaceForm::Euclidean, SpaceForm::Hyperbolic, SpaceForm::Elliptic}) {
    double R = kind == SpaceForm::Elliptic ? 2.5 : 3.0;
    auto m = make_space_form(kind, 4, R);
    std::uniform_real_distribution<double> unif(1e-3, R);
    for (int t = 0; t < 100; ++t) {
      double r = unif(rng);
      CHECK(std::abs(m.psi_second(r) / m.psi(r) + *m.curvature) <= 1e-9);
      double dp = m.psi_prime(r);
      CHECK(std::abs(dp * dp - 1.0 + *m.curvature * m.psi(r) * m.psi(r)) <= 1e-10);
    }
  }
}

TEST_CASE("phi closed forms against the quadrature oracle") {
  auto hyp = make_space_form(SpaceForm::Hyperbolic, 3, 2.0);
  CHECK(phi(hyp, 1.0) == doctest::Approx(0.5430806348152437).epsilon(1e-13));
  CHECK(phi(hyp, 1.0) == doctest::Approx(quad_oracle(hyp, 1.0)).epsilon(1e-10));

  auto euc = make_space_form(SpaceForm::Euclidean, 3, 2.0);
  CHECK(phi(euc, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(phi(euc, 0.0) == 0.0);

  auto ell = make_space_form(SpaceForm::Elliptic, 3, 2.0);
  CHECK(phi(ell, 1.3) == doctest::Approx(quad_oracle(ell, 1.3)).epsilon(1e-10));

  CHECK_THROWS_AS(phi(euc, -0.1), DomainError);
  CHECK_THROWS_AS(phi(euc, 2.1), DomainError);
}

TEST_CASE("sup phi/psi: closed values and dense-scan oracle") {
  auto hyp = make_space_form(SpaceForm::Hyperbolic, 3, 1.0);
  CHECK(sup_phi_over_psi(hyp) == doctest::Approx(0.46211715726000976).epsilon(1e-12));
  auto euc = make_space_form(SpaceForm::Euclidean, 3, 1.0);
  CHECK(sup_phi_over_psi(euc) == doctest::Approx(0.5).epsilon(1e-14));
  auto ell = make_space_form(SpaceForm::Elliptic, 3, 0.2);
  CHECK(sup_phi_over_psi(ell) == doctest::Approx(0.10033467208545055).epsilon(1e-12));

  // dense scan oracle
  for (const auto* m : {&hyp, &euc, &ell}) {
    double best = 0.0;
    for (int i = 1; i <= 20000; ++i) {
      double r = m->radius * i / 20000;
      best = std::max(best, phi(*m, r) / m->psi(r));
    }
    CHECK(sup_phi_over_psi(*m) == doctest::Approx(best).epsilon(1e-8));
  }
}

TEST_CASE("custom model: sinh evaluators agree with the hyperbolic closed form") {
  auto custom = make_custom_model(
      5, 1.0, [](double r) { return std::sinh(r); }, [](double r) { return std::cosh(r); },
      [](double r) { return std::sinh(r); });
  auto hyp = make_space_form(SpaceForm::Hyperbolic, 5, 1.0);
  CHECK(sup_phi_over_psi(custom) == doctest::Approx(sup_phi_over_psi(hyp)).epsilon(1e-8));
  CHECK(phi(custom, 0.8) == doctest::Approx(phi(hyp, 0.8)).epsilon(1e-10));
  CHECK(delta_psi(custom) == doctest::Approx(0.49).epsilon(1e-3));

  CHECK_THROWS_AS(make_custom_model(
                      3, 1.0, [](double r) { return r * (1.0 - r); },
                      [](double r) { return 1.0 - 2.0 * r; }, [](double) { return -2.0; }),
                  GeometryError); // psi''(0) != 0

  // psi' < 0 near 0 violates the hypotheses
  CHECK_THROWS_AS(make_custom_model(
                      3, 1.0, [](double r) { return -r; }, [](double) { return -1.0; },
                      [](double) { return 0.0; }),
                  GeometryError);
}

TEST_CASE("hardy constant: (Hardy:ctant) equals the closed forms") {
  // frozen: H = ((cosh1+1)/(cosh1-1) + 3)/4 for sinh, n=3, R=1
  auto h31 = make_space_form(SpaceForm::Hyperbolic, 3, 1.0);
  CHECK(hardy_constant(h31) == doctest::Approx(1.9206735942077923).epsilon(1e-13));

  // elliptic n=3, R=pi/3: (1+cos)/(1-cos) = 3 makes H vanish
  auto e3 = make_space_form(SpaceForm::Elliptic, 3, 3.14159265358979323846 / 3.0);
  CHECK(std::abs(hardy_constant(e3)) <= 1e-10);

  // elliptic small ball: sin^2 R/(1-cos R)^2 ~ 4/R^2 dominates n(n-2)
  auto e10 = make_space_form(SpaceForm::Elliptic, 10, 0.1);
  CHECK(hardy_constant(e10) > 0);

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(3, 14);
  std::uniform_real_distribution<double> rad(0.05, 2.0);
  for (int t = 0; t < 20; ++t) {
    int n = dim(rng);
    double R = rad(rng);
    auto hyp = make_space_form(SpaceForm::Hyperbolic, n, R);
    double sh = std::sinh(R), ch = std::cosh(R);
    double closed = 0.25 * (sh * sh / ((ch - 1.0) * (ch - 1.0)) + n * (n - 2.0));
    CHECK(hardy_constant(hyp) == doctest::Approx(closed).epsilon(1e-10));

    double Re = 0.4 * rad(rng);
    auto ell = make_space_form(SpaceForm::Elliptic, n, Re);
    double se = std::sin(Re), ce = std::cos(Re);
    double closed_e = 0.25 * (se * se / ((ce - 1.0) * (ce - 1.0)) - n * (n - 2.0));
    CHECK(hardy_constant(ell) == doctest::Approx(closed_e).epsilon(1e-10));
  }

  CHECK_THROWS_AS(hardy_constant(make_space_form(SpaceForm::Hyperbolic, 2, 1.0)), DomainError);
}

TEST_CASE("critical radii: closed forms, back-substitution, bisection oracle") {
  auto e3 = make_space_form(SpaceForm::Elliptic, 3, 1.0);
  auto c3 = critical_radii(e3);
  CHECK(c3.r0 == doctest::Approx(3.14159265358979323846 / 3.0).epsilon(1e-13));

  auto e10 = make_space_form(SpaceForm::Elliptic, 10, 0.2);
  auto c10 = critical_radii(e10);
  CHECK(c10.r0 == doctest::Approx(std::acos(79.0 / 81.0)).epsilon(1e-13));
  CHECK(c10.re == doctest::Approx(std::asin(std::sqrt(8.0 / 9.0))).epsilon(1e-13));
  CHECK(c10.rp == doctest::Approx(std::asin(std::sqrt(0.8))).epsilon(1e-13));

  // defining relations, residual < 1e-12
  double s = c10.r0;
  CHECK(std::abs(std::sin(s) * std::sin(s) / ((1 - std::cos(s)) * (1 - std::cos(s))) - 80.0) <
        1e-10); // 80 = n(n-2); the ratio is O(100), so 1e-12 on the radius
  CHECK(std::abs(std::sin(c10.re) * std::sin(c10.re) - 8.0 / 9.0) < 1e-12);
  CHECK(std::abs(std::sin(c10.rp) * std::sin(c10.rp) - 0.8) < 1e-12);

  // bisection oracle for R0(10) on sin^2 s/(1-cos s)^2 - 80
  auto g = [](double x) {
    double num = std::sin(x) * std::sin(x);
    double den = (1 - std::cos(x)) * (1 - std::cos(x));
    return num / den - 80.0;
  };
  double lo = 0.01, hi = 1.5;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  CHECK(c10.r0 == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));

  auto hyp = make_space_form(SpaceForm::Hyperbolic, 7, 1.0);
  auto ch = critical_radii(hyp);
  CHECK(std::isinf(ch.r0));
  CHECK(std::isinf(ch.re));
  CHECK(std::isinf(ch.rp));

  CHECK_THROWS_AS(critical_radii(make_space_form(SpaceForm::Elliptic, 2, 1.0)), DomainError);
}

TEST_CASE("delta_psi") {
  CHECK(delta_psi(make_space_form(SpaceForm::Hyperbolic, 10, 1.0)) == doctest::Approx(0.49));
  CHECK(delta_psi(make_space_form(SpaceForm::Elliptic, 10, 0.2)) == doctest::Approx(0.098));
  // large elliptic ball: capped just below pi/2
  CHECK(delta_psi(make_space_form(SpaceForm::Elliptic, 3, 3.1)) <
        3.14159265358979323846 / 2.0);
}
