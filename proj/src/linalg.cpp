#include "pklab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pklab {

Mat cholesky(const Mat& a, double rel_tol) {
  const int n = a.size();
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
  if (max_diag == 0.0) throw conditioning_error("cholesky: zero matrix");

  Mat l(n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= rel_tol * max_diag)
      throw conditioning_error("cholesky: matrix not positive definite");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

std::vector<double> forward_solve(const Mat& l, const std::vector<double>& b) {
  const int n = l.size();
  std::vector<double> y(b);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
    y[i] /= l(i, i);
  }
  return y;
}

std::vector<double> backward_solve_transposed(const Mat& l, const std::vector<double>& y) {
  const int n = l.size();
  std::vector<double> x(y);
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) x[i] -= l(k, i) * x[k];
    x[i] /= l(i, i);
  }
  return x;
}

EigenDecomposition jacobi_eigh(const Mat& a, double tol, int max_sweeps) {
  const int n = a.size();
  Mat w = a;
  Mat v(n);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;

  double norm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm += w(i, j) * w(i, j);
  norm = std::sqrt(norm);
  if (norm == 0.0) norm = 1.0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * w(i, j) * w(i, j);
    if (std::sqrt(off) <= tol * norm) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int k = 0; k < n; ++k) {
          const double wkp = w(k, p), wkq = w(k, q);
          w(k, p) = c * wkp - s * wkq;
          w(k, q) = s * wkp + c * wkq;
        }
        for (int k = 0; k < n; ++k) {
          const double wpk = w(p, k), wqk = w(q, k);
          w(p, k) = c * wpk - s * wqk;
          w(q, k) = s * wpk + c * wqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return w(i, i) < w(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Mat(n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = w(order[k], order[k]);
    for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

PencilSolution generalized_eigh(const Mat& m, const Mat& b) {
  const int n = m.size();
  const Mat l = cholesky(b);

  // C = L^-1 M L^-T, built column by column.
  Mat c(n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> col(n);
    for (int i = 0; i < n; ++i) col[i] = m(i, j);
    col = forward_solve(l, col);
    for (int i = 0; i < n; ++i) c(i, j) = col[i];
  }
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(n);
    for (int j = 0; j < n; ++j) row[j] = c(i, j);
    row = forward_solve(l, row);
    for (int j = 0; j < n; ++j) c(i, j) = row[j];
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double s = 0.5 * (c(i, j) + c(j, i));
      c(i, j) = c(j, i) = s;
    }

  const EigenDecomposition eig = jacobi_eigh(c);

  PencilSolution sol;
  sol.values = eig.values;
  sol.vectors.resize(n);
  for (int k = 0; k < n; ++k) {
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = eig.vectors(i, k);
    sol.vectors[k] = backward_solve_transposed(l, y);
  }
  return sol;
}

}  // namespace pklab
