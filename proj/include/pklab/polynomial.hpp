#pragma once

#include <map>
#include <span>
#include <vector>

namespace pklab {

using MultiIndex = std::vector<int>;

/// Graded lexicographic order on exponent vectors: lower total degree first,
/// ties broken lexicographically. Canonical term order for serialization.
struct GradedLex {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// Sparse multivariate polynomial with real coefficients, exact coefficient
/// arithmetic (no quadrature, no symbolic backend). Terms that combine to
/// exactly zero are removed.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, double, GradedLex>;

  Polynomial() = default;
  explicit Polynomial(int dim) : dim_(dim) {}

  static Polynomial constant(int dim, double c);
  /// The coordinate monomial x_axis (0-based axis).
  static Polynomial variable(int dim, int axis);
  static Polynomial monomial(int dim, MultiIndex exponents, double coeff);

  int dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;  // -1 for the zero polynomial

  void add_term(const MultiIndex& exponents, double coeff);
  double coefficient(const MultiIndex& exponents) const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator-() const;

  Polynomial derivative(int axis) const;
  double operator()(std::span<const double> x) const;

  bool operator==(const Polynomial& rhs) const {
    return dim_ == rhs.dim_ && terms_ == rhs.terms_;
  }

 private:
  int dim_ = 0;
  TermMap terms_;
};

}  // namespace pklab
