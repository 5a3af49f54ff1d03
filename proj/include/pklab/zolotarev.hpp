#pragma once

#include <vector>

#include "pklab/measure.hpp"
#include "pklab/spectral.hpp"

namespace pklab {

/// Admissible test direction: f_theta(x) = -cos(theta . x) / |theta|^2 has
/// Hessian Frobenius norm |cos(theta . x)| <= 1 everywhere.
struct CosineTest {
  std::vector<double> theta;
};

struct StabilityReport {
  int dim = 0;
  int degree = 0;
  int theta_grid_size = 0;
  double cpk_lower = 0.0;
  double zol2_lower = 0.0;
  double rhs_constant = 20.0;
  double rhs = 0.0;
  bool consistent = false;
  double slack = 1e-9;
};

/// Log-spaced magnitudes in [lo, hi] along every coordinate axis plus the
/// normalized diagonal; (n+1) * count tests.
std::vector<CosineTest> default_theta_grid(int n, int count = 64, double lo = 0.25,
                                           double hi = 8.0);

/// Lower bound on d_Zol,2(mu, nu): max over the grid of
/// |int cos(theta.x) dnu - int cos(theta.x) dmu| / |theta|^2.
double zol2_lower(const QuadratureMeasure& mu, const QuadratureMeasure& nu,
                  const std::vector<CosineTest>& thetas);

/// rhs_constant * n^2 * sqrt(cpk (cpk - 1)); the explicit constant of the
/// stability bound is 20. Values of cpk within 1e-8 below 1 are clamped to 1
/// (the lower-bound estimator can round just under the Gaussian value).
double stein_upper_bound(double cpk, int n, double rhs_constant = 20.0);

/// Assembles both sides of the stability inequality for mu against gamma.
/// Requires mu to satisfy the moment assumption.
StabilityReport stability_report(const QuadratureMeasure& mu, int degree,
                                 const std::vector<CosineTest>& thetas, double slack = 1e-9,
                                 double rhs_constant = 20.0);

}  // namespace pklab
