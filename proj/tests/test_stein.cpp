#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pklab/hermite.hpp"
#include "pklab/stein.hpp"
#include "test_support.hpp"

using namespace pklab;

namespace {

const QuadratureMeasure& gamma_quad() {
  static const QuadratureMeasure mu = build_gauss_hermite(2, 16);
  return mu;
}

Polynomial mono(int dim, MultiIndex e, double c = 1.0) {
  return Polynomial::monomial(dim, std::move(e), c);
}

// Independent oracle for the cosine family: reduce to the 1-d profile
// phi(x) = theta / |theta|^2 * I1(theta . x),
//   I1(u) = int_0^1 sin(s u) exp(-(1-s^2)|theta|^2/2) ds       (dense Simpson)
double cosine_profile(double u, double theta_sq, int deriv) {
  const int panels = 20000;
  const double h = 1.0 / panels;
  const auto f = [&](double s) {
    const double damp = std::exp(-0.5 * (1.0 - s * s) * theta_sq);
    switch (deriv) {
      case 0: return std::sin(s * u) * damp;
      case 1: return s * std::cos(s * u) * damp;
      default: return -s * s * std::sin(s * u) * damp;
    }
  };
  double acc = f(0.0) + f(1.0);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("ou semigroup: identity, eigenfunctions, closed forms") {
  const ScalarField x1 = ScalarField::from_polynomial(mono(2, {1, 0}));
  const ScalarField x1sq = ScalarField::from_polynomial(mono(2, {2, 0}));
  const std::vector<double> x{0.7, -1.3};

  CHECK(ou_semigroup(x1, 0.0, x, gamma_quad()) == doctest::Approx(0.7).epsilon(1e-13));
  for (double t : {0.1, 0.5, 2.0}) {
    CHECK(ou_semigroup(x1, t, x, gamma_quad()) == doctest::Approx(std::exp(-t) * 0.7).epsilon(1e-12));
    const double expected = std::exp(-2.0 * t) * 0.49 + (1.0 - std::exp(-2.0 * t));
    CHECK(ou_semigroup(x1sq, t, x, gamma_quad()) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("hermite polynomials are semigroup eigenfunctions") {
  testsupport::Rng rng(51);
  for (const MultiIndex alpha : {MultiIndex{1, 0}, {2, 1}, {3, 0}, {2, 2}, {0, 4}}) {
    const ScalarField he = ScalarField::from_polynomial(hermite_he_multi(alpha));
    int order = 0;
    for (int a : alpha) order += a;
    for (int trial = 0; trial < 5; ++trial) {
      const std::vector<double> x = rng.point(2, 2.0);
      const double t = rng.uniform(0.05, 1.5);
      const double lhs = ou_semigroup(he, t, x, gamma_quad());
      const double rhs = std::exp(-order * t) * hermite_he_multi(alpha)(x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("semigroup law on probes") {
  const ScalarField f = ScalarField::from_polynomial(
      mono(2, {3, 0}) + mono(2, {1, 2}, -2.0) + mono(2, {0, 1}, 0.5));
  testsupport::Rng rng(52);
  for (int trial = 0; trial < 4; ++trial) {
    const double s = rng.uniform(0.1, 0.8), t = rng.uniform(0.1, 0.8);
    // P_s f as a value-only field; the composition never differentiates it
    const ScalarField psf = ScalarField::analytic(
        2, [&f, s](std::span<const double> y) { return ou_semigroup(f, s, y, gamma_quad()); },
        nullptr, nullptr);
    const std::vector<double> x = rng.point(2, 1.5);
    CHECK(ou_semigroup(psf, t, x, gamma_quad()) ==
          doctest::Approx(ou_semigroup(f, s + t, x, gamma_quad())).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("spectral solver reproduces the closed forms exactly") {
  // f = x1: phi = e1
  const SteinSolution s1 = solve_stein(ScalarField::from_polynomial(mono(2, {1, 0})));
  REQUIRE(s1.phi_poly.has_value());
  CHECK((*s1.phi_poly)[0] == Polynomial::constant(2, 1.0));
  CHECK((*s1.phi_poly)[1].is_zero());

  // f = x1^2: phi = x1 e1
  const SteinSolution s2 = solve_stein(ScalarField::from_polynomial(mono(2, {2, 0})));
  CHECK((*s2.phi_poly)[0] == Polynomial::variable(2, 0));
  CHECK((*s2.phi_poly)[1].is_zero());
  CHECK(s2.f_gaussian_mean == 1.0);

  // f = x1 x2: phi = (x2/2, x1/2)
  const SteinSolution s3 = solve_stein(ScalarField::from_polynomial(mono(2, {1, 1})));
  CHECK((*s3.phi_poly)[0] == 0.5 * Polynomial::variable(2, 1));
  CHECK((*s3.phi_poly)[1] == 0.5 * Polynomial::variable(2, 0));

  CHECK_THROWS_AS(solve_stein(ScalarField::from_polynomial(mono(2, {9, 0}))),
                  std::invalid_argument);
}

TEST_CASE("solver linearity is exact on the polynomial path") {
  testsupport::Rng rng(53);
  const Polynomial f = rng.polynomial(2, 5, 6);
  const Polynomial g = rng.polynomial(2, 5, 6);
  const double a = 2.25, b = -0.75;

  const SteinSolution sf = solve_stein(ScalarField::from_polynomial(f));
  const SteinSolution sg = solve_stein(ScalarField::from_polynomial(g));
  const SteinSolution sc = solve_stein(ScalarField::from_polynomial(a * f + b * g));
  for (int i = 0; i < 2; ++i) {
    const Polynomial expect = a * (*sf.phi_poly)[i] + b * (*sg.phi_poly)[i];
    Polynomial diff = (*sc.phi_poly)[i] - expect;
    double worst = 0.0;
    for (const auto& [e, c] : diff.terms()) worst = std::max(worst, std::abs(c));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("poisson residual vanishes for polynomial f up to degree 6") {
  testsupport::Rng rng(54);
  const auto probes = probe_grid(2, 100);
  REQUIRE(probes.size() == 100);
  for (int trial = 0; trial < 12; ++trial) {
    const Polynomial f = rng.polynomial(2, 6, 8);
    const ScalarField field = ScalarField::from_polynomial(f);
    const SteinSolution sol = solve_stein(field);
    CHECK(verify_poisson(field, sol, probes) <= 1e-10);
  }
  // f constant: phi = 0, residual 0
  const ScalarField c = ScalarField::from_polynomial(Polynomial::constant(2, 4.2));
  const SteinSolution sol = solve_stein(c);
  CHECK((*sol.phi_poly).is_zero());
  CHECK(verify_poisson(c, sol, probes) == 0.0);
}

TEST_CASE("semigroup path agrees with the spectral path on polynomials") {
  // wrap an exact polynomial as an analytic field to force the OU quadrature
  const Polynomial p = mono(2, {3, 0}) + mono(2, {1, 1}, -1.5) + mono(2, {0, 2}, 0.5);
  const ScalarField exact = ScalarField::from_polynomial(p);
  const ScalarField wrapped = ScalarField::analytic(
      2, [exact](std::span<const double> x) { return exact.value(x); },
      [exact](std::span<const double> x) { return exact.gradient(x); },
      [exact](std::span<const double> x) { return exact.hessian(x); });

  const SteinSolution spectral = solve_stein(exact);
  const SteinSolution quad = solve_stein(wrapped);
  CHECK(quad.kind == SteinSolution::Kind::semigroup_quadrature);

  testsupport::Rng rng(55);
  for (int trial = 0; trial < 6; ++trial) {
    const std::vector<double> x = rng.point(2, 2.5);
    const auto pa = spectral.phi(x), pb = quad.phi(x);
    for (int i = 0; i < 2; ++i) CHECK(pb[static_cast<std::size_t>(i)] ==
                                      doctest::Approx(pa[static_cast<std::size_t>(i)]).epsilon(1e-11).scale(1.0));
    const Mat ja = spectral.jacobian(x), jb = quad.jacobian(x);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(jb(i, j) == doctest::Approx(ja(i, j)).epsilon(1e-10).scale(1.0));
    const auto ta = spectral.second(x), tb = quad.second(x);
    for (std::size_t i = 0; i < ta.size(); ++i)
      CHECK(tb[i] == doctest::Approx(ta[i]).epsilon(5e-5).scale(1.0));
  }
  CHECK(quad.f_gaussian_mean == doctest::Approx(spectral.f_gaussian_mean).epsilon(1e-12).scale(1.0));
}

TEST_CASE("cosine solution matches the 1-d profile oracle") {
  const std::vector<double> theta{1.2, -0.9};
  const double theta_sq = 1.2 * 1.2 + 0.9 * 0.9;
  const ScalarField f = ScalarField::cosine(theta);
  const SteinSolution sol = solve_stein(f);

  testsupport::Rng rng(56);
  for (int trial = 0; trial < 6; ++trial) {
    const std::vector<double> x = rng.point(2, 3.0);
    const double u = theta[0] * x[0] + theta[1] * x[1];
    const std::vector<double> phi = sol.phi(x);
    const double profile = cosine_profile(u, theta_sq, 0) / theta_sq;
    for (int i = 0; i < 2; ++i)
      CHECK(phi[static_cast<std::size_t>(i)] ==
            doctest::Approx(theta[static_cast<std::size_t>(i)] * profile).epsilon(1e-8).scale(1.0));

    const Mat jac = sol.jacobian(x);
    const double jprofile = cosine_profile(u, theta_sq, 1) / theta_sq;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(jac(i, j) == doctest::Approx(theta[static_cast<std::size_t>(i)] *
                                           theta[static_cast<std::size_t>(j)] * jprofile)
                               .epsilon(1e-8)
                               .scale(1.0));
  }

  CHECK(sol.f_gaussian_mean ==
        doctest::Approx(-std::exp(-0.5 * theta_sq) / theta_sq).epsilon(1e-12));

  const auto probes = probe_grid(2, 60);  // |x| <= 3 region mostly
  std::vector<std::vector<double>> close;
  for (const auto& p : probes) {
    double r2 = 0.0;
    for (double v : p) r2 += v * v;
    if (r2 <= 9.0) close.push_back(p);
  }
  CHECK(verify_poisson(f, sol, close) <= 1e-6);
}

TEST_CASE("recentering: quadratic f collapses, cubic f shifts") {
  // f quadratic (with cross term): phi_g must vanish identically. This pins
  // the x^T B x subtraction; the Poisson equation fails for any other scale.
  const Polynomial fq = mono(2, {1, 1}) + mono(2, {2, 0}, 0.5) + mono(2, {1, 0}, 2.0);
  const ScalarField f = ScalarField::from_polynomial(fq);
  const SteinSolution sol = solve_stein(f);
  const auto [g, sol_g] = recenter_solution(f, sol);
  REQUIRE(sol_g.phi_poly.has_value());
  CHECK(sol_g.phi_poly->is_zero());
  CHECK(g.poly()->total_degree() <= 0);  // everything subtracted

  // f = x1^3: phi = (x1^2 + 2) e1, a = (2,0), B = 0, g = x1^3 - 2 x1
  const ScalarField cubic = ScalarField::from_polynomial(mono(2, {3, 0}));
  const SteinSolution sol3 = solve_stein(cubic);
  const auto [g3, sol_g3] = recenter_solution(cubic, sol3);
  CHECK((*sol_g3.phi_poly)[0] == Polynomial::variable(2, 0) * Polynomial::variable(2, 0));
  CHECK((*sol_g3.phi_poly)[1].is_zero());
  CHECK(*g3.poly() == mono(2, {3, 0}) + mono(2, {1, 0}, -2.0));

  const std::vector<double> zero{0.0, 0.0};
  CHECK(sol_g3.phi(zero)[0] == 0.0);
  CHECK(sol_g3.jacobian(zero)(0, 0) == 0.0);

  // the recentered pair still solves its Poisson equation
  const auto probes = probe_grid(2, 80);
  CHECK(verify_poisson(g3, sol_g3, probes) <= 1e-10);
}

TEST_CASE("recentering an analytic solution") {
  const ScalarField f = ScalarField::cosine({2.0, 1.0});
  const SteinSolution sol = solve_stein(f);
  const auto [g, sol_g] = recenter_solution(f, sol);

  for (double v : sol_g.origin_value) CHECK(v == 0.0);
  const std::vector<double> zero{0.0, 0.0};
  const auto phi0 = sol_g.phi(zero);
  for (double v : phi0) CHECK(std::abs(v) <= 1e-15);

  const auto probes = probe_grid(2, 50);
  CHECK(verify_poisson(g, sol_g, probes) <= 1e-6);
}

TEST_CASE("V construction: defining identity, continuity, gradients") {
  const ScalarField cubic = ScalarField::from_polynomial(mono(2, {3, 0}));
  const auto [g, sol_g] = recenter_solution(cubic, solve_stein(cubic));
  const MatrixTestField v = build_V(sol_g);

  testsupport::Rng rng(57);
  // V^T(x) x = phi_g(x) off the origin
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> x = rng.point(2, 3.0);
    const Mat val = v.value(x);
    const std::vector<double> phi = sol_g.phi(x);
    for (int j = 0; j < 2; ++j) {
      double contracted = 0.0;
      for (int i = 0; i < 2; ++i) contracted += val(i, j) * x[static_cast<std::size_t>(i)];
      CHECK(contracted == doctest::Approx(phi[static_cast<std::size_t>(j)]).epsilon(1e-10).scale(1.0));
    }
  }

  // continuity at the origin along rays
  for (double r : {1.0, 0.1, 0.01, 1e-3}) {
    const std::vector<double> x{r * 0.6, -r * 0.8};
    const Mat val = v.value(x);
    double norm = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) norm = std::max(norm, std::abs(val(i, j)));
    CHECK(norm <= 2.0 * r);  // |V| <= |phi_g(x)|/|x| <= (1/2)|x| growth
  }

  // un-recentered solutions are rejected
  CHECK_THROWS_AS(build_V(solve_stein(cubic)), std::invalid_argument);
}

TEST_CASE("V entry gradients match central finite differences") {
  const ScalarField f = ScalarField::cosine({1.7, 0.6});
  const auto [g, sol_g] = recenter_solution(f, solve_stein(f));
  const MatrixTestField v = build_V(sol_g);

  testsupport::Rng rng(0x5EED);
  for (int trial = 0; trial < 25; ++trial) {
    const std::vector<double> x = rng.point(2, 3.0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const std::vector<double> grad = v.entry_gradient(i, j, x);
        for (int k = 0; k < 2; ++k) {
          const double fd = testsupport::central_difference(
              [&](const std::vector<double>& p) { return v.value(p)(i, j); }, x, k);
          CHECK(grad[static_cast<std::size_t>(k)] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        }
      }
  }
}

TEST_CASE("classical stein identity at gamma") {
  // V_ij = x_i x_j: both sides equal 6 in 2d
  MatrixField v(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      v(i, j) = Polynomial::variable(2, i) * Polynomial::variable(2, j);
  CHECK(stein_residual(matrix_test_field(v), gamma_quad()) <= 1e-12);

  testsupport::Rng rng(58);
  for (int trial = 0; trial < 20; ++trial) {
    MatrixField w(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) w(i, j) = rng.polynomial(2, 3, 4);
    CHECK(stein_residual(matrix_test_field(w), gamma_quad()) <= 1e-8);
  }
}

TEST_CASE("regularity report: gradient and hessian bounds") {
  const auto probes = probe_grid(2, 100);

  const ScalarField cosine = ScalarField::cosine({2.0, 0.0});
  const RegularityReport cos_rep = regularity_check(cosine, solve_stein(cosine), probes);
  CHECK(cos_rep.hess_sup_f == 1.0);
  CHECK(cos_rep.max_grad_norm <= 0.5 + 1e-8);
  CHECK(cos_rep.max_hess_norm <= 1.0 + 1e-8);
  CHECK(cos_rep.grad_ok);
  CHECK(cos_rep.hess_ok);

  // linear f: gradient of phi vanishes
  const ScalarField lin = ScalarField::from_polynomial(mono(2, {1, 0}, 3.0));
  const RegularityReport lin_rep = regularity_check(lin, solve_stein(lin), probes);
  CHECK(lin_rep.max_grad_norm == 0.0);

  // f = x1^2/2: phi = x1 e1 / 2, gradient norm exactly 1/2, bound tight
  const ScalarField half = ScalarField::from_polynomial(mono(2, {2, 0}, 0.5));
  const RegularityReport half_rep = regularity_check(half, solve_stein(half), probes);
  CHECK(half_rep.max_grad_norm == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(half_rep.hess_sup_f == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(half_rep.grad_ok);
}

TEST_CASE("probe grid is deterministic and stays in the ball") {
  const auto a = probe_grid(2, 100);
  const auto b = probe_grid(2, 100);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  for (std::size_t i = 16; i < a.size(); ++i) {  // random tail lies in |x| <= 4
    double r2 = 0.0;
    for (double v : a[i]) r2 += v * v;
    CHECK(r2 <= 16.0 + 1e-12);
  }
}
