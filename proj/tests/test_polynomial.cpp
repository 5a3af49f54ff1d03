#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pklab/hermite.hpp"
#include "pklab/polynomial.hpp"
#include "test_support.hpp"

using namespace pklab;

TEST_CASE("polynomial arithmetic is exact in the coefficients") {
  const Polynomial x = Polynomial::variable(2, 0);
  const Polynomial y = Polynomial::variable(2, 1);
  const Polynomial p = (x + y) * (x - y);  // x^2 - y^2

  CHECK(p.coefficient({2, 0}) == 1.0);
  CHECK(p.coefficient({0, 2}) == -1.0);
  CHECK(p.coefficient({1, 1}) == 0.0);
  CHECK(p.terms().size() == 2);  // the cross terms cancel exactly and are pruned
  CHECK(p.total_degree() == 2);

  const Polynomial q = p - p;
  CHECK(q.is_zero());
  CHECK(q.total_degree() == -1);
}

TEST_CASE("derivative and evaluation") {
  // p = 3 x^2 y + y^3
  Polynomial p(2);
  p.add_term({2, 1}, 3.0);
  p.add_term({0, 3}, 1.0);

  const Polynomial px = p.derivative(0);
  CHECK(px.coefficient({1, 1}) == 6.0);
  CHECK(px.terms().size() == 1);

  const Polynomial py = p.derivative(1);
  CHECK(py.coefficient({2, 0}) == 3.0);
  CHECK(py.coefficient({0, 2}) == 3.0);

  const std::vector<double> at{1.5, -2.0};
  CHECK(p(at) == doctest::Approx(3.0 * 2.25 * -2.0 + -8.0));
}

TEST_CASE("graded lexicographic term order") {
  Polynomial p(2);
  p.add_term({0, 2}, 1.0);
  p.add_term({1, 0}, 1.0);
  p.add_term({0, 0}, 1.0);
  p.add_term({1, 1}, 1.0);

  std::vector<MultiIndex> order;
  for (const auto& [e, c] : p.terms()) order.push_back(e);
  CHECK(order == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 2}, {1, 1}});
}

TEST_CASE("product against random evaluation points") {
  testsupport::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Polynomial a = rng.polynomial(3, 4, 6);
    const Polynomial b = rng.polynomial(3, 3, 5);
    const Polynomial ab = a * b;
    const std::vector<double> x = rng.point(3, 2.0);
    CHECK(ab(x) == doctest::Approx(a(x) * b(x)).epsilon(1e-12));
  }
}

TEST_CASE("Hermite polynomials: values, coefficients, recurrence") {
  CHECK(hermite_he(6, 0.0) == -15.0);
  CHECK(hermite_he(0, 1.7) == 1.0);
  CHECK(hermite_he(1, 1.7) == 1.7);

  const Polynomial he3 = hermite_he_poly(1, 0, 3);  // x^3 - 3x
  CHECK(he3.coefficient({3}) == 1.0);
  CHECK(he3.coefficient({1}) == -3.0);

  const Polynomial he6 = hermite_he_poly(1, 0, 6);
  CHECK(he6.coefficient({6}) == 1.0);
  CHECK(he6.coefficient({4}) == -15.0);
  CHECK(he6.coefficient({2}) == 45.0);
  CHECK(he6.coefficient({0}) == -15.0);

  testsupport::Rng rng(6);
  for (int k = 0; k <= 8; ++k) {
    const Polynomial hk = hermite_he_poly(1, 0, k);
    const double x = rng.uniform(-3.0, 3.0);
    const std::vector<double> pt{x};
    CHECK(hk(pt) == doctest::Approx(hermite_he(k, x)).epsilon(1e-12));
  }
}

TEST_CASE("monomial to Hermite expansion") {
  // x^4 = He4 + 6 He2 + 3
  const std::vector<double> a4 = monomial_to_hermite_coeffs(4);
  CHECK(a4[4] == 1.0);
  CHECK(a4[2] == 6.0);
  CHECK(a4[0] == 3.0);
  CHECK(a4[3] == 0.0);

  // reconstruct x^k from the expansion and compare at random points
  testsupport::Rng rng(7);
  for (int k = 0; k <= 8; ++k) {
    const std::vector<double> coeffs = monomial_to_hermite_coeffs(k);
    const double x = rng.uniform(-2.5, 2.5);
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) sum += coeffs[static_cast<std::size_t>(j)] * hermite_he(j, x);
    CHECK(sum == doctest::Approx(std::pow(x, k)).epsilon(1e-12));
  }
}

TEST_CASE("multivariate Hermite product polynomial") {
  const Polynomial he = hermite_he_multi({2, 1});  // (x^2 - 1) y
  CHECK(he.coefficient({2, 1}) == 1.0);
  CHECK(he.coefficient({0, 1}) == -1.0);

  // orthogonality under the Gaussian-moment oracle:
  // int He_alpha He_beta dgamma = alpha! delta_{alpha,beta}
  const std::vector<MultiIndex> idx{{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 1}};
  for (const MultiIndex& a : idx)
    for (const MultiIndex& b : idx) {
      const double inner = testsupport::gaussian_integral(hermite_he_multi(a) * hermite_he_multi(b));
      double norm = 1.0;
      for (int k : a)
        for (int j = 2; j <= k; ++j) norm *= j;
      CHECK(inner == doctest::Approx(a == b ? norm : 0.0).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("quadrature rules integrate the right monomials") {
  const Rule1D gh = gauss_hermite_1d(8);
  double wsum = 0.0;
  for (double w : gh.weights) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t i = 0; i < gh.nodes.size() / 2; ++i)
    CHECK(gh.nodes[i] == -gh.nodes[gh.nodes.size() - 1 - i]);

  // exact for x^{2k}, 2k <= 15
  for (int k = 0; k <= 7; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i)
      sum += gh.weights[i] * std::pow(gh.nodes[i], 2 * k);
    CHECK(sum == doctest::Approx(testsupport::gaussian_moment({2 * k})).epsilon(1e-12));
  }

  const Rule1D gl = gauss_legendre_01(16);
  for (int k = 0; k <= 9; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
      sum += gl.weights[i] * std::pow(gl.nodes[i], k);
    CHECK(sum == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  }
}
