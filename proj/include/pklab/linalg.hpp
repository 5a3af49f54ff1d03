#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pklab {

/// Raised when a factorization or eigensolve cannot proceed (singular or
/// indefinite operator where a positive definite one is required).
struct conditioning_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense row-major square matrix of doubles.
class Mat {
 public:
  Mat() = default;
  explicit Mat(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Mat vectors;                 // column k is the eigenvector of values[k]
};

/// Cholesky factor L (lower) with A = L L^T. Throws conditioning_error if a
/// pivot drops below rel_tol times the largest diagonal entry.
Mat cholesky(const Mat& a, double rel_tol = 1e-13);

/// Solves L y = b (forward) for lower-triangular L.
std::vector<double> forward_solve(const Mat& l, const std::vector<double>& b);

/// Solves L^T x = y (backward) for lower-triangular L.
std::vector<double> backward_solve_transposed(const Mat& l, const std::vector<double>& y);

/// Cyclic Jacobi eigensolver for a symmetric matrix. Deterministic sweep
/// order, eigenvalues returned ascending with matching eigenvectors.
EigenDecomposition jacobi_eigh(const Mat& a, double tol = 1e-14, int max_sweeps = 64);

struct PencilSolution {
  std::vector<double> values;       // ascending eigenvalues of M w = lambda B w
  std::vector<std::vector<double>> vectors;  // vectors[k] matches values[k]
};

/// Symmetric-definite pencil M w = lambda B w via congruence: B = L L^T,
/// then a Jacobi eigensolve of L^-1 M L^-T. B must be positive definite.
PencilSolution generalized_eigh(const Mat& m, const Mat& b);

}  // namespace pklab
