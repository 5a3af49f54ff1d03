#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pklab/fields.hpp"
#include "pklab/linalg.hpp"
#include "pklab/measure.hpp"
#include "pklab/polynomial.hpp"

namespace pklab {

/// Scalar test function with first and second derivative evaluators. Either
/// an exact polynomial or a closed-form analytic function (cosine family).
class ScalarField {
 public:
  enum class Kind { polynomial, analytic };

  static ScalarField from_polynomial(Polynomial p, std::string spec = {});
  /// f_theta(x) = -cos(theta . x) / |theta|^2; Hessian Frobenius norm <= 1
  /// everywhere, so the function is admissible for the Zolotarev supremum.
  static ScalarField cosine(std::vector<double> theta);
  static ScalarField analytic(int dim, std::function<double(std::span<const double>)> value,
                              std::function<std::vector<double>(std::span<const double>)> gradient,
                              std::function<Mat(std::span<const double>)> hessian,
                              std::optional<double> hessian_sup = std::nullopt,
                              std::string spec = {});

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  const std::optional<Polynomial>& poly() const { return poly_; }
  const std::string& spec() const { return spec_; }
  /// Global sup of the Hessian Frobenius norm, when known in closed form.
  std::optional<double> hessian_sup() const { return hessian_sup_; }

  double value(std::span<const double> x) const { return value_(x); }
  std::vector<double> gradient(std::span<const double> x) const { return gradient_(x); }
  Mat hessian(std::span<const double> x) const { return hessian_(x); }

 private:
  int dim_ = 0;
  Kind kind_ = Kind::polynomial;
  std::optional<Polynomial> poly_;
  std::string spec_;
  std::optional<double> hessian_sup_;
  std::function<double(std::span<const double>)> value_;
  std::function<std::vector<double>(std::span<const double>)> gradient_;
  std::function<Mat(std::span<const double>)> hessian_;
};

/// Barbour's solution phi_f of the Gaussian Poisson equation
/// f - int f dgamma = x . phi_f - Tr(grad phi_f), with derivative evaluators.
struct SteinSolution {
  enum class Kind { hermite_spectral, semigroup_quadrature };

  Kind kind = Kind::hermite_spectral;
  int dim = 0;
  std::function<std::vector<double>(std::span<const double>)> phi;
  /// J(i,j) = d_j phi_i (the Hessian of the potential; symmetric).
  std::function<Mat(std::span<const double>)> jacobian;
  /// Flattened third derivatives: T[(i*n + j)*n + k] = d_k d_j phi_i.
  std::function<std::vector<double>(std::span<const double>)> second;
  std::optional<VectorField> phi_poly;  // exact components on the spectral path
  std::vector<double> origin_value;
  Mat origin_jacobian;
  double f_gaussian_mean = 0.0;
};

/// Matrix test field with batch value+gradient evaluation at a point.
struct MatrixTestField {
  int dim = 0;
  /// Fills v = V(x) and grads[(i*n + j)*n + k] = d_k [V]_ij (x).
  std::function<void(std::span<const double>, Mat&, std::vector<double>&)> eval_all;

  Mat value(std::span<const double> x) const;
  std::vector<double> entry_gradient(int i, int j, std::span<const double> x) const;
};

struct SteinOptions {
  int s_nodes = 64;  // Gauss-Legendre nodes for the semigroup time integral
  int z_nodes = 20;  // Gauss-Hermite nodes per axis for the gamma average
  int max_poly_degree = 8;
};

struct RegularityReport {
  double max_grad_norm = 0.0;   // max over grid of ||grad phi_f||_F
  double max_hess_norm = 0.0;   // max over grid of ||grad^2 phi_f||_F
  double hess_sup_f = 0.0;      // sup ||grad^2 f||_F (closed form or grid max)
  bool grad_ok = false;         // max_grad_norm <= hess_sup_f / 2 + 1e-8
  bool hess_ok = false;         // max_hess_norm <= hess_sup_f + 1e-8
};

/// P_t f(x) = int f(e^-t x + sqrt(1-e^-2t) z) dgamma(z) by quadrature.
double ou_semigroup(const ScalarField& f, double t, std::span<const double> x,
                    const QuadratureMeasure& gamma_quad);

/// Solve the Poisson equation. Polynomial f (degree <= 8) uses the exact
/// Hermite-spectral division; analytic f uses s = e^-t substituted
/// Gauss-Legendre time quadrature of the semigroup representation.
SteinSolution solve_stein(const ScalarField& f, const SteinOptions& opt = {});

/// Max over probes of |f(x) - int f dgamma - x . phi(x) + Tr(grad phi(x))|.
double verify_poisson(const ScalarField& f, const SteinSolution& sol,
                      const std::vector<std::vector<double>>& probes);

/// Recentering of Section-2.4 type: subtracts from f the affine-quadratic
/// part generated by phi_f(0) and grad phi_f(0), so that the new solution
/// satisfies phi_g(0) = 0 and grad phi_g(0) = 0 exactly.
std::pair<ScalarField, SteinSolution> recenter_solution(const ScalarField& f,
                                                        const SteinSolution& sol);

/// V(x) = x phi_g^T(x) / |x|^2 (V(0) = 0), with closed-form entry gradients.
/// Requires phi_g(0) = 0 and grad phi_g(0) = 0 within tol.
MatrixTestField build_V(const SteinSolution& sol_g, double tol = 1e-10);

/// Adapter: exact polynomial matrix field as a MatrixTestField.
MatrixTestField matrix_test_field(const MatrixField& v);

/// | int (x x^T - Id) . V dmu - int (x grad^T) . V dmu | by quadrature.
double stein_residual(const MatrixTestField& v, const QuadratureMeasure& mu);

/// ||grad [V]_ij||_{L^2(mu)} for every entry, row-major.
std::vector<double> v_gradient_norms(const MatrixTestField& v, const QuadratureMeasure& mu);

/// Gradient and Hessian bounds for phi_f against the sup of ||grad^2 f||.
RegularityReport regularity_check(const ScalarField& f, const SteinSolution& sol,
                                  const std::vector<std::vector<double>>& grid);

/// Deterministic probe set: scaled Gauss-Hermite nodes plus seeded random
/// points in the ball |x| <= 4 (seed 0x5EED).
std::vector<std::vector<double>> probe_grid(int n, std::size_t count);

}  // namespace pklab
