#include "pklab/polynomial.hpp"

#include <cassert>
#include <numeric>
#include <stdexcept>

namespace pklab {

bool GradedLex::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const int da = std::accumulate(a.begin(), a.end(), 0);
  const int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da < db;
  return a < b;
}

Polynomial Polynomial::constant(int dim, double c) {
  Polynomial p(dim);
  p.add_term(MultiIndex(dim, 0), c);
  return p;
}

Polynomial Polynomial::variable(int dim, int axis) {
  MultiIndex e(dim, 0);
  e.at(axis) = 1;
  return monomial(dim, std::move(e), 1.0);
}

Polynomial Polynomial::monomial(int dim, MultiIndex exponents, double coeff) {
  if (static_cast<int>(exponents.size()) != dim)
    throw std::invalid_argument("monomial: exponent count != dim");
  Polynomial p(dim);
  p.add_term(exponents, coeff);
  return p;
}

int Polynomial::total_degree() const {
  if (terms_.empty()) return -1;
  // graded order: the last term has maximal total degree
  const MultiIndex& e = terms_.rbegin()->first;
  return std::accumulate(e.begin(), e.end(), 0);
}

void Polynomial::add_term(const MultiIndex& exponents, double coeff) {
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(exponents, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::coefficient(const MultiIndex& exponents) const {
  const auto it = terms_.find(exponents);
  return it == terms_.end() ? 0.0 : it->second;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  assert(dim_ == rhs.dim_ || terms_.empty() || rhs.terms_.empty());
  if (dim_ == 0) dim_ = rhs.dim_;
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  assert(dim_ == rhs.dim_ || terms_.empty() || rhs.terms_.empty());
  if (dim_ == 0) dim_ = rhs.dim_;
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  Polynomial out(dim_ ? dim_ : rhs.dim_);
  MultiIndex e(out.dim(), 0);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      for (int i = 0; i < out.dim(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(*this);
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

Polynomial Polynomial::derivative(int axis) const {
  Polynomial out(dim_);
  MultiIndex e;
  for (const auto& [exp, c] : terms_) {
    if (exp[axis] == 0) continue;
    e = exp;
    e[axis] -= 1;
    out.add_term(e, c * exp[axis]);
  }
  return out;
}

double Polynomial::operator()(std::span<const double> x) const {
  double total = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int i = 0; i < dim_; ++i) {
      const double xi = x[static_cast<std::size_t>(i)];
      for (int k = 0; k < e[i]; ++k) t *= xi;
    }
    total += t;
  }
  return total;
}

}  // namespace pklab
