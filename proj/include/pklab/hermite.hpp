#pragma once

#include <vector>

#include "pklab/polynomial.hpp"

namespace pklab {

// Probabilists' Hermite polynomials He_k (weight e^{-x^2/2}) throughout.

/// He_k(x) by the three-term recurrence.
double hermite_he(int k, double x);

/// He_k along a given axis, as an exact dim-variate polynomial.
Polynomial hermite_he_poly(int dim, int axis, int k);

/// Product He_alpha(x) = prod_i He_{alpha_i}(x_i) as an exact polynomial.
Polynomial hermite_he_multi(const MultiIndex& alpha);

/// Coefficients a_{k,j} in x^k = sum_j a_{k,j} He_j(x); zero unless
/// j <= k with the same parity. a_{k,j} = k! / (j! 2^t t!), t = (k-j)/2.
std::vector<double> monomial_to_hermite_coeffs(int k);

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for the standard normal weight: integrates
/// polynomials of degree <= 2m-1 against gamma exactly; weights sum to 1.
/// Nodes are exactly +-symmetric.
Rule1D gauss_hermite_1d(int m);

/// Gauss-Legendre rule mapped to (0,1); weights sum to 1.
Rule1D gauss_legendre_01(int m);

}  // namespace pklab
