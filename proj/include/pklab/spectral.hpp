#pragma once

#include <vector>

#include "pklab/fields.hpp"
#include "pklab/linalg.hpp"
#include "pklab/measure.hpp"

namespace pklab {

/// Trial subspace for the Galerkin estimate: Hermite vector fields, each
/// centered and with its antisymmetric projection removed, kernel fields and
/// exact duplicates dropped.
struct BasisSet {
  std::vector<VectorField> fields;
  int degree = 0;
  int dim = 0;

  int size() const { return static_cast<int>(fields.size()); }
};

/// The two quadratic forms of the inequality: M is the L^2(mu) Gram of the
/// basis, K the Dirichlet Gram of the symmetrized gradients.
struct GramPair {
  Mat m;
  Mat k;
  bool exact = true;  // false when some integrand exceeded the rule's exactness degree
};

/// Certified lower bound on C_PK(mu) with its witnessing field.
struct CpkEstimate {
  double value = 0.0;
  int degree = 0;
  int basis_size = 0;
  VectorField witness;
  std::vector<double> witness_coeffs;
};

struct IbpCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Hermite vector fields e_k He_alpha, 1 <= |alpha| <= degree, processed as
/// described on BasisSet. Requires mu to pass check_moments.
BasisSet build_basis(int n, int degree, const QuadratureMeasure& mu);

/// Quadrature of both Gram matrices over the basis.
GramPair assemble(const BasisSet& basis, const QuadratureMeasure& mu);

/// Top eigenvalue of the pencil M w = lambda (2K) w over the trial space:
/// a lower bound on C_PK(mu), since the constant is the supremum of the
/// same Rayleigh quotient over all admissible fields.
CpkEstimate cpk_lower_bound(const QuadratureMeasure& mu, int degree);

/// ||u - A_u x - mean||^2 / (2 ||sym_grad u||^2) under mu. The projection
/// onto the antisymmetric maps is computed explicitly, so the infimum over
/// that subspace is exact. Rejects fields in the kernel of sym_grad.
double rayleigh(const VectorField& u, const QuadratureMeasure& mu);

/// Smallest eps >= 0 such that (2 - (eps/2)^2) C ||sym_grad u||^2 <= quotient
/// norm^2. Requires C >= rayleigh(u, mu).
double ibp_epsilon(const VectorField& u, const QuadratureMeasure& mu, double c);

/// Approximate integration-by-parts residual:
/// lhs = |int (u-a_u).(v-a_v) dmu - 2C int sym_grad u . sym_grad v dmu|,
/// rhs = eps C ||sym_grad u|| ||sym_grad v||, holds = (lhs <= rhs + 1e-10).
IbpCheck ibp_residual_check(const VectorField& u, const VectorField& v,
                            const QuadratureMeasure& mu, double c);

}  // namespace pklab
