#include "pklab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pklab {

VectorField::VectorField(std::vector<Polynomial> comps) : comps_(std::move(comps)) {
  const int n = static_cast<int>(comps_.size());
  for (const Polynomial& p : comps_)
    if (p.dim() != n && !p.is_zero())
      throw std::invalid_argument("VectorField: component dim != component count");
}

int VectorField::total_degree() const {
  int d = -1;
  for (const Polynomial& p : comps_) d = std::max(d, p.total_degree());
  return d;
}

bool VectorField::is_zero() const {
  for (const Polynomial& p : comps_)
    if (!p.is_zero()) return false;
  return true;
}

void VectorField::eval(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < comps_.size(); ++i) out[i] = comps_[i](x);
}

VectorField& VectorField::operator+=(const VectorField& rhs) {
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += rhs.comps_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& rhs) {
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= rhs.comps_[i];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (Polynomial& p : comps_) p *= s;
  return *this;
}

bool MatrixField::is_zero() const {
  for (const Polynomial& p : entries_)
    if (!p.is_zero()) return false;
  return true;
}

std::size_t AntisymMatrix::upper_index(int i, int j) const {
  // row-major strict upper triangle
  return static_cast<std::size_t>(i) * (2 * dim_ - i - 1) / 2 + (j - i - 1);
}

double AntisymMatrix::operator()(int i, int j) const {
  if (i == j) return 0.0;
  if (i < j) return upper_[upper_index(i, j)];
  return -upper_[upper_index(j, i)];
}

void AntisymMatrix::set(int i, int j, double value) {
  if (i == j) throw std::invalid_argument("AntisymMatrix: diagonal entries are zero");
  if (i < j)
    upper_[upper_index(i, j)] = value;
  else
    upper_[upper_index(j, i)] = -value;
}

double AntisymMatrix::frobenius_sq() const {
  double s = 0.0;
  for (double v : upper_) s += 2.0 * v * v;
  return s;
}

bool AntisymMatrix::is_zero() const {
  for (double v : upper_)
    if (v != 0.0) return false;
  return true;
}

MatrixField jacobian(const VectorField& u) {
  const int n = u.dim();
  MatrixField out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = u[i].derivative(j);
  return out;
}

MatrixField sym_grad(const VectorField& u) {
  const int n = u.dim();
  MatrixField out(n);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      Polynomial s = u[l].derivative(k) + u[k].derivative(l);
      s *= 0.5;
      out(k, l) = s;
      if (l != k) out(l, k) = std::move(s);
    }
  return out;
}

VectorField candidate_field(int i, int j, int n) {
  if (i == j) throw std::invalid_argument("candidate_field: i == j");
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw std::invalid_argument("candidate_field: index out of range");
  VectorField u(n);
  const Polynomial xi = Polynomial::variable(n, i);
  const Polynomial xj = Polynomial::variable(n, j);
  u[i] = Polynomial::constant(n, 1.0) - xj * xj;
  u[j] = xi * xj;
  return u;
}

VectorField linear_field(const AntisymMatrix& a) {
  const int n = a.dim();
  VectorField u(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a(i, j) != 0.0) u[i] += a(i, j) * Polynomial::variable(n, j);
  return u;
}

VectorField linear_field(int n, std::span<const double> m) {
  VectorField u(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = m[static_cast<std::size_t>(i) * n + j];
      if (v != 0.0) u[i] += v * Polynomial::variable(n, j);
    }
  return u;
}

AntisymMatrix antisym_projection(const VectorField& u, const QuadratureMeasure& mu,
                                 double isotropy_tol) {
  const int n = u.dim();
  if (mu.dim() != n) throw std::invalid_argument("antisym_projection: dim mismatch");

  double iso = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = integrate(mu, [&](std::span<const double> x) { return x[i] * x[j]; });
      iso = std::max(iso, std::abs(v - (i == j ? 1.0 : 0.0)));
    }
  if (iso > isotropy_tol)
    throw std::invalid_argument("antisym_projection: measure is not isotropic");

  AntisymMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Polynomial p = u[i] * Polynomial::variable(n, j) - Polynomial::variable(n, i) * u[j];
      a.set(i, j, 0.5 * integrate_poly(mu, p));
    }
  return a;
}

namespace {

InnerValue integrate_with_exactness(const QuadratureMeasure& mu, const Polynomial& integrand) {
  InnerValue out;
  out.exact = integrand.total_degree() <= mu.exactness_degree();
  out.value = integrate_poly(mu, integrand);
  return out;
}

}  // namespace

InnerValue l2_inner_checked(const VectorField& u, const VectorField& v,
                            const QuadratureMeasure& mu) {
  Polynomial integrand(u.dim());
  for (int i = 0; i < u.dim(); ++i) integrand += u[i] * v[i];
  return integrate_with_exactness(mu, integrand);
}

double l2_inner(const VectorField& u, const VectorField& v, const QuadratureMeasure& mu) {
  return l2_inner_checked(u, v, mu).value;
}

InnerValue dirichlet_inner_checked(const VectorField& u, const VectorField& v,
                                   const QuadratureMeasure& mu) {
  const MatrixField su = sym_grad(u);
  const MatrixField sv = sym_grad(v);
  Polynomial integrand(u.dim());
  for (int k = 0; k < u.dim(); ++k)
    for (int l = 0; l < u.dim(); ++l) integrand += su(k, l) * sv(k, l);
  return integrate_with_exactness(mu, integrand);
}

double dirichlet_inner(const VectorField& u, const VectorField& v, const QuadratureMeasure& mu) {
  return dirichlet_inner_checked(u, v, mu).value;
}

std::vector<double> mean_vector(const VectorField& u, const QuadratureMeasure& mu) {
  std::vector<double> mean(static_cast<std::size_t>(u.dim()));
  for (int i = 0; i < u.dim(); ++i) mean[static_cast<std::size_t>(i)] = integrate_poly(mu, u[i]);
  return mean;
}

VectorField quotient_representative(const VectorField& u, const QuadratureMeasure& mu,
                                    double isotropy_tol) {
  VectorField out = u;
  const std::vector<double> mean = mean_vector(u, mu);
  for (int i = 0; i < u.dim(); ++i)
    out[i] -= Polynomial::constant(u.dim(), mean[static_cast<std::size_t>(i)]);
  const AntisymMatrix a = antisym_projection(out, mu, isotropy_tol);
  out -= linear_field(a);
  return out;
}

}  // namespace pklab
