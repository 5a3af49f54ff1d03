#include "pklab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pklab/errors.hpp"
#include "pklab/hermite.hpp"

namespace pklab {

namespace {

constexpr double kKernelRelTol = 1e-12;
constexpr double kDedupRelTol = 1e-12;

// Multi-indices with 1 <= |alpha| <= degree, graded then lexicographic.
std::vector<MultiIndex> trial_multi_indices(int n, int degree) {
  std::vector<MultiIndex> out;
  MultiIndex alpha(static_cast<std::size_t>(n), 0);
  for (int d = 1; d <= degree; ++d) {
    // enumerate compositions of d over n slots, lexicographically
    const auto rec = [&](auto&& self, int slot, int remaining) -> void {
      if (slot == n - 1) {
        alpha[static_cast<std::size_t>(slot)] = remaining;
        out.push_back(alpha);
        return;
      }
      for (int v = 0; v <= remaining; ++v) {
        alpha[static_cast<std::size_t>(slot)] = v;
        self(self, slot + 1, remaining - v);
      }
    };
    rec(rec, 0, d);
  }
  return out;
}

}  // namespace

BasisSet build_basis(int n, int degree, const QuadratureMeasure& mu) {
  if (degree < 1) throw std::invalid_argument("build_basis: degree must be >= 1");
  const MomentReport moments = check_moments(mu);
  if (!moments.passes)
    throw hypothesis_error("build_basis: measure fails the moment assumption");

  std::vector<VectorField> raw;
  for (const MultiIndex& alpha : trial_multi_indices(n, degree)) {
    const Polynomial he = hermite_he_multi(alpha);
    for (int k = 0; k < n; ++k) {
      VectorField u(n);
      u[k] = he;
      raw.push_back(quotient_representative(u, mu));
    }
  }

  // Kernel removal: drop fields whose Dirichlet energy is negligible.
  std::vector<double> energy(raw.size());
  double max_energy = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    energy[i] = dirichlet_inner(raw[i], raw[i], mu);
    max_energy = std::max(max_energy, energy[i]);
  }
  if (max_energy <= 0.0) throw std::invalid_argument("build_basis: empty basis after kernel removal");

  std::vector<VectorField> survivors;
  std::vector<double> diag;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (energy[i] >= kKernelRelTol * max_energy) {
      survivors.push_back(std::move(raw[i]));
      diag.push_back(energy[i]);
    }
  }

  // Duplicate removal: the antisymmetric projection maps e_k x_l and e_l x_k
  // to the same symmetric-linear field. Gram-Schmidt in the Dirichlet inner
  // product detects the collisions; accepted fields are kept unmodified.
  const int ns = static_cast<int>(survivors.size());
  Mat k(ns);
  for (int i = 0; i < ns; ++i) {
    k(i, i) = diag[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < ns; ++j)
      k(i, j) = k(j, i) =
          dirichlet_inner(survivors[static_cast<std::size_t>(i)], survivors[static_cast<std::size_t>(j)], mu);
  }

  std::vector<int> kept;
  std::vector<std::vector<double>> ortho;  // coefficient vectors over survivors, K-orthonormal
  for (int i = 0; i < ns; ++i) {
    std::vector<double> v(static_cast<std::size_t>(ns), 0.0);
    v[static_cast<std::size_t>(i)] = 1.0;
    for (const std::vector<double>& u : ortho) {
      double proj = 0.0;
      for (int a = 0; a < ns; ++a)
        for (int b = 0; b < ns; ++b)
          proj += u[static_cast<std::size_t>(a)] * k(a, b) * v[static_cast<std::size_t>(b)];
      for (int a = 0; a < ns; ++a) v[static_cast<std::size_t>(a)] -= proj * u[static_cast<std::size_t>(a)];
    }
    double norm_sq = 0.0;
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b)
        norm_sq += v[static_cast<std::size_t>(a)] * k(a, b) * v[static_cast<std::size_t>(b)];
    if (norm_sq > kDedupRelTol * k(i, i)) {
      kept.push_back(i);
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (double& c : v) c *= inv;
      ortho.push_back(std::move(v));
    }
  }

  BasisSet basis;
  basis.degree = degree;
  basis.dim = n;
  basis.fields.reserve(kept.size());
  for (int i : kept) basis.fields.push_back(std::move(survivors[static_cast<std::size_t>(i)]));
  return basis;
}

GramPair assemble(const BasisSet& basis, const QuadratureMeasure& mu) {
  const int nb = basis.size();
  GramPair gram;
  gram.m = Mat(nb);
  gram.k = Mat(nb);

  // entries are independent quadratures; parallelize over the upper triangle
  std::vector<std::pair<int, int>> entries;
  entries.reserve(static_cast<std::size_t>(nb) * (nb + 1) / 2);
  for (int i = 0; i < nb; ++i)
    for (int j = i; j < nb; ++j) entries.emplace_back(i, j);

  bool exact = true;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(&& : exact)
#endif
  for (long long e = 0; e < static_cast<long long>(entries.size()); ++e) {
    const auto [i, j] = entries[static_cast<std::size_t>(e)];
    const InnerValue mv = l2_inner_checked(basis.fields[static_cast<std::size_t>(i)],
                                           basis.fields[static_cast<std::size_t>(j)], mu);
    const InnerValue kv = dirichlet_inner_checked(basis.fields[static_cast<std::size_t>(i)],
                                                  basis.fields[static_cast<std::size_t>(j)], mu);
    gram.m(i, j) = gram.m(j, i) = mv.value;
    gram.k(i, j) = gram.k(j, i) = kv.value;
    exact = exact && mv.exact && kv.exact;
  }
  gram.exact = exact;
  return gram;
}

CpkEstimate cpk_lower_bound(const QuadratureMeasure& mu, int degree) {
  if (degree < 2) throw std::invalid_argument("cpk_lower_bound: degree must be >= 2");
  const BasisSet basis = build_basis(mu.dim(), degree, mu);
  const GramPair gram = assemble(basis, mu);

  Mat twice_k(basis.size());
  for (int i = 0; i < basis.size(); ++i)
    for (int j = 0; j < basis.size(); ++j) twice_k(i, j) = 2.0 * gram.k(i, j);

  const PencilSolution pencil = generalized_eigh(gram.m, twice_k);

  // deterministic tie rule: among eigenvalues within 1e-12 of the top,
  // take the first in the sorted (ascending) output
  const int last = static_cast<int>(pencil.values.size()) - 1;
  const double top = pencil.values[static_cast<std::size_t>(last)];
  const double tie_tol = 1e-12 * std::max(1.0, std::abs(top));
  int pick = last;
  while (pick > 0 && pencil.values[static_cast<std::size_t>(pick) - 1] >= top - tie_tol) --pick;

  std::vector<double> coeff = pencil.vectors[static_cast<std::size_t>(pick)];
  double norm = 0.0;
  for (double c : coeff) norm += c * c;
  norm = std::sqrt(norm);
  int lead = 0;
  for (std::size_t i = 1; i < coeff.size(); ++i)
    if (std::abs(coeff[i]) > std::abs(coeff[static_cast<std::size_t>(lead)])) lead = static_cast<int>(i);
  const double sign = coeff[static_cast<std::size_t>(lead)] < 0.0 ? -1.0 : 1.0;
  for (double& c : coeff) c *= sign / norm;

  CpkEstimate est;
  est.value = top;
  est.degree = degree;
  est.basis_size = basis.size();
  est.witness_coeffs = coeff;
  est.witness = VectorField(mu.dim());
  for (int i = 0; i < basis.size(); ++i)
    est.witness += coeff[static_cast<std::size_t>(i)] * basis.fields[static_cast<std::size_t>(i)];
  return est;
}

namespace {

struct QuotientData {
  double q;  // quotient norm squared
  double s;  // Dirichlet energy
};

QuotientData quotient_data(const VectorField& u, const QuadratureMeasure& mu) {
  const VectorField rep = quotient_representative(u, mu);
  QuotientData d;
  d.q = l2_inner(rep, rep, mu);
  d.s = dirichlet_inner(u, u, mu);
  return d;
}

}  // namespace

double rayleigh(const VectorField& u, const QuadratureMeasure& mu) {
  const QuotientData d = quotient_data(u, mu);
  if (d.s <= 1e-14)
    throw std::invalid_argument("rayleigh: field lies in the kernel of sym_grad");
  return d.q / (2.0 * d.s);
}

double ibp_epsilon(const VectorField& u, const QuadratureMeasure& mu, double c) {
  const QuotientData d = quotient_data(u, mu);
  if (d.s <= 1e-14)
    throw std::invalid_argument("ibp_epsilon: field lies in the kernel of sym_grad");
  const double quotient = d.q / (2.0 * d.s);
  if (c < quotient - 1e-12)
    throw std::invalid_argument("ibp_epsilon: C below the field's Rayleigh quotient");
  return 2.0 * std::sqrt(std::max(0.0, 2.0 - d.q / (c * d.s)));
}

IbpCheck ibp_residual_check(const VectorField& u, const VectorField& v,
                            const QuadratureMeasure& mu, double c) {
  const VectorField ru = quotient_representative(u, mu);
  const VectorField rv = quotient_representative(v, mu);
  const double cross = l2_inner(ru, rv, mu);
  const double dirichlet_cross = dirichlet_inner(u, v, mu);
  const double su = dirichlet_inner(u, u, mu);
  const double sv = dirichlet_inner(v, v, mu);
  const double eps = ibp_epsilon(u, mu, c);

  IbpCheck check;
  check.lhs = std::abs(cross - 2.0 * c * dirichlet_cross);
  check.rhs = eps * c * std::sqrt(su) * std::sqrt(sv);
  check.holds = check.lhs <= check.rhs + 1e-10;
  return check;
}

}  // namespace pklab
