#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pklab/polynomial.hpp"
#include "pklab/reduce.hpp"

namespace pklab {

inline constexpr std::size_t kDefaultNodeBudget = 10'000'000;
inline constexpr double kDefaultMomentTol = 1e-10;

/// One product-measure factor.
struct MarginalSpec {
  enum class Kind { standard_normal, hermite6, gaussian_var };
  Kind kind = Kind::standard_normal;
  double param = 0.0;  // hermite6: delta; gaussian_var: sigma^2

  static MarginalSpec normal() { return {Kind::standard_normal, 0.0}; }
  static MarginalSpec hermite6(double delta) { return {Kind::hermite6, delta}; }
  static MarginalSpec gaussian_var(double sigma2) { return {Kind::gaussian_var, sigma2}; }
};

/// A probability measure on R^n given by deterministic quadrature nodes and
/// weights. Immutable after construction; integration is a pure reduction.
class QuadratureMeasure {
 public:
  QuadratureMeasure(int dim, std::vector<double> nodes, std::vector<double> weights,
                    int exactness_degree);

  int dim() const { return dim_; }
  std::size_t node_count() const { return weights_.size(); }
  int exactness_degree() const { return exactness_degree_; }
  std::span<const double> node(std::size_t i) const {
    return {nodes_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& flat_nodes() const { return nodes_; }

  // Construction provenance, kept for reports and refinement.
  const std::vector<MarginalSpec>& marginals() const { return marginals_; }
  int nodes_per_axis() const { return nodes_per_axis_; }
  void set_provenance(std::vector<MarginalSpec> marginals, int m);

 private:
  int dim_;
  std::vector<double> nodes_;  // node_count * dim, row-major
  std::vector<double> weights_;
  int exactness_degree_;
  std::vector<MarginalSpec> marginals_;
  int nodes_per_axis_ = 0;
};

/// Moment-assumption residuals (max over the respective index families).
struct MomentReport {
  double centered_residual = 0.0;
  double isotropy_residual = 0.0;
  double third_moment_residual = 0.0;
  double fourth_moment_residual = 0.0;
  bool passes = false;
  double tolerance = kDefaultMomentTol;
  bool exactness_warning = false;  // exactness_degree < 4

  double max_residual() const;
};

/// Tensor Gauss-Hermite rule for the standard Gaussian gamma on R^n.
/// Requires n >= 2 and even m >= 2 (no node at the origin).
QuadratureMeasure build_gauss_hermite(int n, int m,
                                      std::size_t node_budget = kDefaultNodeBudget);

/// Product measure on Gauss-Hermite nodes. hermite6 factors reweight by the
/// density ratio 1 + delta He6; gaussian_var factors rescale the axis nodes
/// (the exact Gauss-Hermite rule of that marginal). Weights sum to 1.
QuadratureMeasure build_product(const std::vector<MarginalSpec>& specs, int m,
                                std::size_t node_budget = kDefaultNodeBudget);

/// Residuals of the moment assumption: mean, covariance vs identity, third
/// moments, and int (x_i^2+x_j^2) x_j^2 dmu vs 4 for i != j.
MomentReport check_moments(const QuadratureMeasure& mu, double tol = kDefaultMomentTol);

/// Largest |delta| keeping 1 + delta He6 >= 0 on R (= 1/|min He6|, the
/// minimum sits at x^2 = 5 + sqrt(10)).
double max_delta_h6();

// ---------------------------------------------------------------------------
// Integration kernels. integrate() is the OpenMP tree-sum path;
// integrate_serial() is the bit-identical serial reference kept for testing.

template <class F>
double integrate(const QuadratureMeasure& mu, F&& f) {
  return tree_sum(mu.node_count(),
                  [&](std::size_t i) { return mu.weights()[i] * f(mu.node(i)); });
}

template <class F>
double integrate_serial(const QuadratureMeasure& mu, F&& f) {
  return tree_sum_serial(mu.node_count(),
                         [&](std::size_t i) { return mu.weights()[i] * f(mu.node(i)); });
}

double integrate_poly(const QuadratureMeasure& mu, const Polynomial& p);

}  // namespace pklab
