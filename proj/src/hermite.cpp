#include "pklab/hermite.hpp"

#include <cmath>
#include <stdexcept>

#include "pklab/linalg.hpp"

namespace pklab {

double hermite_he(int k, double x) {
  if (k == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int j = 1; j < k; ++j) {
    const double next = x * cur - j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Polynomial hermite_he_poly(int dim, int axis, int k) {
  Polynomial prev = Polynomial::constant(dim, 1.0);
  if (k == 0) return prev;
  const Polynomial x = Polynomial::variable(dim, axis);
  Polynomial cur = x;
  for (int j = 1; j < k; ++j) {
    Polynomial next = x * cur - static_cast<double>(j) * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Polynomial hermite_he_multi(const MultiIndex& alpha) {
  const int dim = static_cast<int>(alpha.size());
  Polynomial out = Polynomial::constant(dim, 1.0);
  for (int i = 0; i < dim; ++i)
    if (alpha[i] > 0) out = out * hermite_he_poly(dim, i, alpha[i]);
  return out;
}

std::vector<double> monomial_to_hermite_coeffs(int k) {
  std::vector<double> a(static_cast<std::size_t>(k) + 1, 0.0);
  double kfac = 1.0;
  for (int i = 2; i <= k; ++i) kfac *= i;
  for (int j = k; j >= 0; j -= 2) {
    const int t = (k - j) / 2;
    double jfac = 1.0;
    for (int i = 2; i <= j; ++i) jfac *= i;
    double tfac = 1.0;
    for (int i = 2; i <= t; ++i) tfac *= i;
    a[static_cast<std::size_t>(j)] = kfac / (jfac * std::ldexp(1.0, t) * tfac);
  }
  return a;
}

namespace {

// Golub-Welsch: nodes/weights from the symmetric Jacobi matrix of the
// orthogonal family. Adequate for the small per-axis counts used here.
Rule1D golub_welsch(const std::vector<double>& offdiag) {
  const int m = static_cast<int>(offdiag.size()) + 1;
  Mat j(m);
  for (int i = 0; i + 1 < m; ++i) {
    j(i, i + 1) = offdiag[static_cast<std::size_t>(i)];
    j(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
  }
  const EigenDecomposition eig = jacobi_eigh(j, 1e-15, 128);
  Rule1D rule;
  rule.nodes = eig.values;
  rule.weights.resize(m);
  for (int k = 0; k < m; ++k) {
    const double v = eig.vectors(0, k);
    rule.weights[static_cast<std::size_t>(k)] = v * v;
  }
  return rule;
}

}  // namespace

Rule1D gauss_hermite_1d(int m) {
  if (m < 1) throw std::invalid_argument("gauss_hermite_1d: m < 1");
  std::vector<double> off(static_cast<std::size_t>(m) - 1);
  for (int k = 1; k < m; ++k) off[static_cast<std::size_t>(k) - 1] = std::sqrt(static_cast<double>(k));
  Rule1D rule = golub_welsch(off);

  // Enforce exact +- node symmetry and weight normalization.
  for (int i = 0, j = m - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[static_cast<std::size_t>(j)] - rule.nodes[static_cast<std::size_t>(i)]);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(j)] = x;
    const double w = 0.5 * (rule.weights[static_cast<std::size_t>(i)] + rule.weights[static_cast<std::size_t>(j)]);
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(j)] = w;
  }
  if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m) / 2] = 0.0;
  double sum = 0.0;
  for (double w : rule.weights) sum += w;
  for (double& w : rule.weights) w /= sum;
  return rule;
}

Rule1D gauss_legendre_01(int m) {
  if (m < 1) throw std::invalid_argument("gauss_legendre_01: m < 1");
  std::vector<double> off(static_cast<std::size_t>(m) - 1);
  for (int k = 1; k < m; ++k)
    off[static_cast<std::size_t>(k) - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  Rule1D rule = golub_welsch(off);
  for (double& x : rule.nodes) x = 0.5 * (x + 1.0);
  double sum = 0.0;
  for (double w : rule.weights) sum += w;
  for (double& w : rule.weights) w /= sum;
  return rule;
}

}  // namespace pklab
