#pragma once

#include <span>
#include <vector>

#include "pklab/measure.hpp"
#include "pklab/polynomial.hpp"

namespace pklab {

/// Polynomial map R^n -> R^n.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(int dim) : comps_(static_cast<std::size_t>(dim), Polynomial(dim)) {}
  explicit VectorField(std::vector<Polynomial> comps);

  int dim() const { return static_cast<int>(comps_.size()); }
  const Polynomial& operator[](int i) const { return comps_[static_cast<std::size_t>(i)]; }
  Polynomial& operator[](int i) { return comps_[static_cast<std::size_t>(i)]; }

  int total_degree() const;
  bool is_zero() const;
  void eval(std::span<const double> x, std::span<double> out) const;

  VectorField& operator+=(const VectorField& rhs);
  VectorField& operator-=(const VectorField& rhs);
  VectorField& operator*=(double s);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(VectorField a, double s) { return a *= s; }
  friend VectorField operator*(double s, VectorField a) { return a *= s; }

 private:
  std::vector<Polynomial> comps_;
};

/// Polynomial map R^n -> M_{n x n}, row-major entries.
class MatrixField {
 public:
  MatrixField() = default;
  explicit MatrixField(int dim)
      : dim_(dim),
        entries_(static_cast<std::size_t>(dim) * dim, Polynomial(dim)) {}

  int dim() const { return dim_; }
  const Polynomial& operator()(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * dim_ + j];
  }
  Polynomial& operator()(int i, int j) {
    return entries_[static_cast<std::size_t>(i) * dim_ + j];
  }
  bool is_zero() const;

 private:
  int dim_ = 0;
  std::vector<Polynomial> entries_;
};

/// Antisymmetric n x n matrix; storage holds the strict upper triangle, so
/// A(i,j) = -A(j,i) is exact by construction.
class AntisymMatrix {
 public:
  AntisymMatrix() = default;
  explicit AntisymMatrix(int dim)
      : dim_(dim), upper_(static_cast<std::size_t>(dim) * (dim - 1) / 2, 0.0) {}

  int dim() const { return dim_; }
  double operator()(int i, int j) const;
  void set(int i, int j, double value);  // i != j; stores +-value appropriately
  double frobenius_sq() const;
  bool is_zero() const;

 private:
  std::size_t upper_index(int i, int j) const;  // requires i < j
  int dim_ = 0;
  std::vector<double> upper_;
};

// ---------------------------------------------------------------------------
// Operations

/// Entry (i,j) = d_j u_i.
MatrixField jacobian(const VectorField& u);

/// Symmetrized gradient: entry (k,l) = (d_k u_l + d_l u_k) / 2. Vanishes
/// exactly on constants and antisymmetric linear maps.
MatrixField sym_grad(const VectorField& u);

/// The extremal candidate u_k(x) = delta_ik (1 - x_j^2) + delta_jk x_i x_j.
/// Indices are 0-based; i != j required.
VectorField candidate_field(int i, int j, int n);

/// x -> A x as a polynomial field.
VectorField linear_field(const AntisymMatrix& a);
VectorField linear_field(int n, std::span<const double> matrix_row_major);

/// L^2(mu)-projection of u onto the antisymmetric linear maps:
/// A_u = (1/2) int (u x^T - x u^T) dmu. Requires mu isotropic within tol.
AntisymMatrix antisym_projection(const VectorField& u, const QuadratureMeasure& mu,
                                 double isotropy_tol = kDefaultMomentTol);

struct InnerValue {
  double value = 0.0;
  bool exact = true;  // false when the integrand degree exceeds the rule's exactness
};

/// int u . v dmu with an exactness flag.
InnerValue l2_inner_checked(const VectorField& u, const VectorField& v,
                            const QuadratureMeasure& mu);
double l2_inner(const VectorField& u, const VectorField& v, const QuadratureMeasure& mu);

/// int sym_grad(u) . sym_grad(v) dmu with an exactness flag.
InnerValue dirichlet_inner_checked(const VectorField& u, const VectorField& v,
                                   const QuadratureMeasure& mu);
double dirichlet_inner(const VectorField& u, const VectorField& v, const QuadratureMeasure& mu);

/// Componentwise mean of u under mu.
std::vector<double> mean_vector(const VectorField& u, const QuadratureMeasure& mu);

/// u minus its mean and its antisymmetric projection: the quotient-space
/// representative used throughout the Rayleigh-quotient machinery.
VectorField quotient_representative(const VectorField& u, const QuadratureMeasure& mu,
                                    double isotropy_tol = kDefaultMomentTol);

}  // namespace pklab
