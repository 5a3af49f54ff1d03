#include "pklab/stein.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pklab/hermite.hpp"
#include "pklab/reduce.hpp"

namespace pklab {

// ---------------------------------------------------------------------------
// ScalarField

ScalarField ScalarField::from_polynomial(Polynomial p, std::string spec) {
  struct Data {
    Polynomial f;
    std::vector<Polynomial> grad;
    std::vector<Polynomial> hess;  // n*n
    int n;
  };
  auto data = std::make_shared<Data>();
  data->n = p.dim();
  data->f = std::move(p);
  data->grad.reserve(static_cast<std::size_t>(data->n));
  for (int i = 0; i < data->n; ++i) data->grad.push_back(data->f.derivative(i));
  for (int i = 0; i < data->n; ++i)
    for (int j = 0; j < data->n; ++j)
      data->hess.push_back(data->grad[static_cast<std::size_t>(i)].derivative(j));

  ScalarField out;
  out.dim_ = data->n;
  out.kind_ = Kind::polynomial;
  out.poly_ = data->f;
  out.spec_ = std::move(spec);
  out.value_ = [data](std::span<const double> x) { return data->f(x); };
  out.gradient_ = [data](std::span<const double> x) {
    std::vector<double> g(static_cast<std::size_t>(data->n));
    for (int i = 0; i < data->n; ++i) g[static_cast<std::size_t>(i)] = data->grad[static_cast<std::size_t>(i)](x);
    return g;
  };
  out.hessian_ = [data](std::span<const double> x) {
    Mat h(data->n);
    for (int i = 0; i < data->n; ++i)
      for (int j = 0; j < data->n; ++j)
        h(i, j) = data->hess[static_cast<std::size_t>(i) * data->n + j](x);
    return h;
  };
  return out;
}

ScalarField ScalarField::cosine(std::vector<double> theta) {
  const int n = static_cast<int>(theta.size());
  double norm_sq = 0.0;
  for (double t : theta) norm_sq += t * t;
  if (norm_sq == 0.0) throw std::invalid_argument("cosine: theta must be nonzero");

  std::ostringstream spec;
  spec << "cos(";
  for (int i = 0; i < n; ++i) spec << (i ? "," : "") << theta[static_cast<std::size_t>(i)];
  spec << ")";

  auto th = std::make_shared<std::vector<double>>(std::move(theta));
  const double inv = 1.0 / norm_sq;

  ScalarField out;
  out.dim_ = n;
  out.kind_ = Kind::analytic;
  out.spec_ = spec.str();
  out.hessian_sup_ = 1.0;
  out.value_ = [th, inv](std::span<const double> x) {
    double dot = 0.0;
    for (std::size_t i = 0; i < th->size(); ++i) dot += (*th)[i] * x[i];
    return -std::cos(dot) * inv;
  };
  out.gradient_ = [th, inv, n](std::span<const double> x) {
    double dot = 0.0;
    for (std::size_t i = 0; i < th->size(); ++i) dot += (*th)[i] * x[i];
    const double s = std::sin(dot) * inv;
    std::vector<double> g(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < th->size(); ++i) g[i] = s * (*th)[i];
    return g;
  };
  out.hessian_ = [th, inv, n](std::span<const double> x) {
    double dot = 0.0;
    for (std::size_t i = 0; i < th->size(); ++i) dot += (*th)[i] * x[i];
    const double c = std::cos(dot) * inv;
    Mat h(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        h(i, j) = c * (*th)[static_cast<std::size_t>(i)] * (*th)[static_cast<std::size_t>(j)];
    return h;
  };
  return out;
}

ScalarField ScalarField::analytic(int dim, std::function<double(std::span<const double>)> value,
                                  std::function<std::vector<double>(std::span<const double>)> gradient,
                                  std::function<Mat(std::span<const double>)> hessian,
                                  std::optional<double> hessian_sup, std::string spec) {
  ScalarField out;
  out.dim_ = dim;
  out.kind_ = Kind::analytic;
  out.spec_ = std::move(spec);
  out.hessian_sup_ = hessian_sup;
  out.value_ = std::move(value);
  out.gradient_ = std::move(gradient);
  out.hessian_ = std::move(hessian);
  return out;
}

// ---------------------------------------------------------------------------
// Ornstein-Uhlenbeck semigroup

double ou_semigroup(const ScalarField& f, double t, std::span<const double> x,
                    const QuadratureMeasure& gamma_quad) {
  if (t < 0.0) throw std::invalid_argument("ou_semigroup: t < 0");
  const double a = std::exp(-t);
  const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
  const int n = gamma_quad.dim();
  // fresh scratch per call: the reduction may invoke this from several threads
  return integrate(gamma_quad, [&](std::span<const double> z) {
    std::vector<double> point(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      point[static_cast<std::size_t>(i)] = a * x[static_cast<std::size_t>(i)] + b * z[static_cast<std::size_t>(i)];
    return f.value(point);
  });
}

// ---------------------------------------------------------------------------
// Stein solver, Hermite-spectral path

namespace {

using HermiteCoeffs = std::map<MultiIndex, double, GradedLex>;

HermiteCoeffs to_hermite_basis(const Polynomial& p) {
  const int n = p.dim();
  HermiteCoeffs out;
  for (const auto& [alpha, c] : p.terms()) {
    std::vector<std::vector<double>> axis_coeffs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      axis_coeffs[static_cast<std::size_t>(i)] = monomial_to_hermite_coeffs(alpha[static_cast<std::size_t>(i)]);

    MultiIndex beta(static_cast<std::size_t>(n), 0);
    const auto rec = [&](auto&& self, int axis, double acc) -> void {
      if (axis == n) {
        out[beta] += acc;
        return;
      }
      const std::vector<double>& tab = axis_coeffs[static_cast<std::size_t>(axis)];
      for (int j = static_cast<int>(tab.size()) - 1; j >= 0; j -= 2) {
        const double a = tab[static_cast<std::size_t>(j)];
        if (a == 0.0) continue;
        beta[static_cast<std::size_t>(axis)] = j;
        self(self, axis + 1, acc * a);
      }
      beta[static_cast<std::size_t>(axis)] = 0;
    };
    rec(rec, 0, c);
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0.0 ? out.erase(it) : std::next(it);
  return out;
}

SteinSolution solve_polynomial(const ScalarField& f, const SteinOptions& opt) {
  const Polynomial& p = *f.poly();
  const int n = p.dim();
  if (p.total_degree() > opt.max_poly_degree)
    throw std::invalid_argument("solve_stein: polynomial degree exceeds the supported maximum");

  const HermiteCoeffs coeffs = to_hermite_basis(p);

  double mean = 0.0;
  std::vector<HermiteCoeffs> comp(static_cast<std::size_t>(n));
  for (const auto& [beta, c] : coeffs) {
    int order = 0;
    for (int b : beta) order += b;
    if (order == 0) {
      mean = c;
      continue;
    }
    // phi = grad( sum_beta c_beta He_beta / |beta| ); d_k He_beta = beta_k He_{beta - e_k}
    for (int k = 0; k < n; ++k) {
      const int bk = beta[static_cast<std::size_t>(k)];
      if (bk == 0) continue;
      MultiIndex gamma = beta;
      gamma[static_cast<std::size_t>(k)] -= 1;
      comp[static_cast<std::size_t>(k)][gamma] += c * bk / order;
    }
  }

  struct Data {
    VectorField phi;
    std::vector<Polynomial> jac;     // n*n, (i,j) = d_j phi_i
    std::vector<Polynomial> second;  // n*n*n, (i,j,k) = d_k d_j phi_i
    int n;
  };
  auto data = std::make_shared<Data>();
  data->n = n;
  data->phi = VectorField(n);
  for (int k = 0; k < n; ++k)
    for (const auto& [gamma, c] : comp[static_cast<std::size_t>(k)])
      data->phi[k] += c * hermite_he_multi(gamma);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) data->jac.push_back(data->phi[i].derivative(j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        data->second.push_back(data->jac[static_cast<std::size_t>(i) * n + j].derivative(k));

  SteinSolution sol;
  sol.kind = SteinSolution::Kind::hermite_spectral;
  sol.dim = n;
  sol.f_gaussian_mean = mean;
  sol.phi_poly = data->phi;
  sol.phi = [data](std::span<const double> x) {
    std::vector<double> v(static_cast<std::size_t>(data->n));
    data->phi.eval(x, v);
    return v;
  };
  sol.jacobian = [data](std::span<const double> x) {
    Mat j(data->n);
    for (int i = 0; i < data->n; ++i)
      for (int c = 0; c < data->n; ++c) j(i, c) = data->jac[static_cast<std::size_t>(i) * data->n + c](x);
    return j;
  };
  sol.second = [data](std::span<const double> x) {
    std::vector<double> t(data->second.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = data->second[i](x);
    return t;
  };

  const std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
  sol.origin_value = sol.phi(origin);
  sol.origin_jacobian = sol.jacobian(origin);
  return sol;
}

// ---------------------------------------------------------------------------
// Stein solver, semigroup-quadrature path

struct SemigroupData {
  ScalarField f;
  Rule1D s_rule;          // Gauss-Legendre on (0,1)
  QuadratureMeasure z;    // Gauss-Hermite rule for the gamma average
  int n;

  SemigroupData(ScalarField field, const SteinOptions& opt)
      : f(std::move(field)),
        s_rule(gauss_legendre_01(opt.s_nodes)),
        z(build_gauss_hermite(f.dim(), opt.z_nodes)),
        n(f.dim()) {}

  std::vector<double> averaged_gradient(double s, std::span<const double> x) const {
    const double b = std::sqrt(std::max(0.0, 1.0 - s * s));
    std::vector<double> avg(static_cast<std::size_t>(n), 0.0);
    std::vector<double> point(static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < z.node_count(); ++p) {
      const auto zeta = z.node(p);
      for (int i = 0; i < n; ++i) point[static_cast<std::size_t>(i)] = s * x[static_cast<std::size_t>(i)] + b * zeta[static_cast<std::size_t>(i)];
      const std::vector<double> g = f.gradient(point);
      const double w = z.weights()[p];
      for (int i = 0; i < n; ++i) avg[static_cast<std::size_t>(i)] += w * g[static_cast<std::size_t>(i)];
    }
    return avg;
  }

  Mat averaged_hessian(double s, std::span<const double> x) const {
    const double b = std::sqrt(std::max(0.0, 1.0 - s * s));
    Mat avg(n);
    std::vector<double> point(static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < z.node_count(); ++p) {
      const auto zeta = z.node(p);
      for (int i = 0; i < n; ++i) point[static_cast<std::size_t>(i)] = s * x[static_cast<std::size_t>(i)] + b * zeta[static_cast<std::size_t>(i)];
      const Mat h = f.hessian(point);
      const double w = z.weights()[p];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) avg(i, j) += w * h(i, j);
    }
    return avg;
  }

  // E[ H_ij(s x + b z) z_k ], accumulated into t with the given factor.
  void accumulate_weighted_hessian(double s, double b, double factor, std::span<const double> x,
                                   std::vector<double>& t) const {
    std::vector<double> point(static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < z.node_count(); ++p) {
      const auto zeta = z.node(p);
      for (int i = 0; i < n; ++i) point[static_cast<std::size_t>(i)] = s * x[static_cast<std::size_t>(i)] + b * zeta[static_cast<std::size_t>(i)];
      const Mat h = f.hessian(point);
      const double w = factor * z.weights()[p];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double hw = w * h(i, j);
          for (int k = 0; k < n; ++k)
            t[(static_cast<std::size_t>(i) * n + j) * n + k] += hw * zeta[static_cast<std::size_t>(k)];
        }
    }
  }
};

SteinSolution solve_semigroup(const ScalarField& f, const SteinOptions& opt) {
  auto data = std::make_shared<SemigroupData>(f, opt);
  const int n = data->n;

  SteinSolution sol;
  sol.kind = SteinSolution::Kind::semigroup_quadrature;
  sol.dim = n;

  // phi(x) = int_0^1 P_{-ln s}(grad f)(x) ds
  sol.phi = [data](std::span<const double> x) {
    std::vector<double> out(static_cast<std::size_t>(data->n), 0.0);
    for (std::size_t q = 0; q < data->s_rule.nodes.size(); ++q) {
      const std::vector<double> avg = data->averaged_gradient(data->s_rule.nodes[q], x);
      for (int i = 0; i < data->n; ++i) out[static_cast<std::size_t>(i)] += data->s_rule.weights[q] * avg[static_cast<std::size_t>(i)];
    }
    return out;
  };

  // grad phi(x) = int_0^1 s P_{-ln s}(hess f)(x) ds
  sol.jacobian = [data](std::span<const double> x) {
    Mat out(data->n);
    for (std::size_t q = 0; q < data->s_rule.nodes.size(); ++q) {
      const double s = data->s_rule.nodes[q];
      const Mat avg = data->averaged_hessian(s, x);
      for (int i = 0; i < data->n; ++i)
        for (int j = 0; j < data->n; ++j) out(i, j) += data->s_rule.weights[q] * s * avg(i, j);
    }
    return out;
  };

  // d_k [grad phi]_ij = int_0^inf e^{-3t} / b(t) E[hess f(e^-t x + b z)_ij z_k] dt,
  // with b(t) = sqrt(1 - e^-2t) (Gaussian integration by parts in z).
  // Split at t = 1; substitute t = tau^2 on [0,1] to remove the endpoint
  // singularity, s = e^-t on the tail.
  sol.second = [data](std::span<const double> x) {
    const int nn = data->n;
    std::vector<double> t(static_cast<std::size_t>(nn) * nn * nn, 0.0);
    for (std::size_t q = 0; q < data->s_rule.nodes.size(); ++q) {
      const double tau = data->s_rule.nodes[q];
      const double w = data->s_rule.weights[q];
      const double tt = tau * tau;
      const double s = std::exp(-tt);
      const double b = std::sqrt(std::max(0.0, 1.0 - s * s));
      if (b > 0.0) data->accumulate_weighted_hessian(s, b, w * 2.0 * tau * s * s * s / b, x, t);
    }
    const double cut = std::exp(-1.0);
    for (std::size_t q = 0; q < data->s_rule.nodes.size(); ++q) {
      const double s = cut * data->s_rule.nodes[q];
      const double w = cut * data->s_rule.weights[q];
      const double b = std::sqrt(std::max(0.0, 1.0 - s * s));
      data->accumulate_weighted_hessian(s, b, w * s * s / b, x, t);
    }
    return t;
  };

  sol.f_gaussian_mean = integrate(data->z, [&](std::span<const double> zeta) { return data->f.value(zeta); });

  const std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
  sol.origin_value = sol.phi(origin);
  sol.origin_jacobian = sol.jacobian(origin);
  return sol;
}

}  // namespace

SteinSolution solve_stein(const ScalarField& f, const SteinOptions& opt) {
  if (f.kind() == ScalarField::Kind::polynomial) return solve_polynomial(f, opt);
  return solve_semigroup(f, opt);
}

double verify_poisson(const ScalarField& f, const SteinSolution& sol,
                      const std::vector<std::vector<double>>& probes) {
  double worst = 0.0;
  for (const std::vector<double>& x : probes) {
    const std::vector<double> phi = sol.phi(x);
    const Mat jac = sol.jacobian(x);
    double dot = 0.0, trace = 0.0;
    for (int i = 0; i < sol.dim; ++i) {
      dot += x[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(i)];
      trace += jac(i, i);
    }
    const double residual = f.value(x) - sol.f_gaussian_mean - dot + trace;
    worst = std::max(worst, std::abs(residual));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Recentering

std::pair<ScalarField, SteinSolution> recenter_solution(const ScalarField& f,
                                                        const SteinSolution& sol) {
  const int n = sol.dim;
  auto a = std::make_shared<std::vector<double>>(sol.origin_value);
  // symmetrized, so the subtracted quadratic has exactly this Hessian/2
  auto b = std::make_shared<Mat>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      (*b)(i, j) = 0.5 * (sol.origin_jacobian(i, j) + sol.origin_jacobian(j, i));

  double trace_b = 0.0;
  for (int i = 0; i < n; ++i) trace_b += (*b)(i, i);

  // g = f - a.x - x^T B x. The quadratic coefficient is forced by the
  // Poisson equation: the Barbour solution of x^T B x is B x, so removing
  // grad phi_f(0) from phi requires the full x^T B x, not half of it.
  ScalarField g;
  if (f.kind() == ScalarField::Kind::polynomial) {
    Polynomial gp = *f.poly();
    for (int i = 0; i < n; ++i) {
      if ((*a)[static_cast<std::size_t>(i)] != 0.0)
        gp -= (*a)[static_cast<std::size_t>(i)] * Polynomial::variable(n, i);
      for (int j = 0; j < n; ++j)
        if ((*b)(i, j) != 0.0)
          gp -= (*b)(i, j) * (Polynomial::variable(n, i) * Polynomial::variable(n, j));
    }
    g = ScalarField::from_polynomial(std::move(gp),
                                     f.spec().empty() ? std::string{} : f.spec() + " (recentered)");
  } else {
    const ScalarField base = f;
    g = ScalarField::analytic(
        n,
        [base, a, b, n](std::span<const double> x) {
          double v = base.value(x);
          for (int i = 0; i < n; ++i) {
            v -= (*a)[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) v -= (*b)(i, j) * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
          }
          return v;
        },
        [base, a, b, n](std::span<const double> x) {
          std::vector<double> grad = base.gradient(x);
          for (int i = 0; i < n; ++i) {
            grad[static_cast<std::size_t>(i)] -= (*a)[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) grad[static_cast<std::size_t>(i)] -= 2.0 * (*b)(i, j) * x[static_cast<std::size_t>(j)];
          }
          return grad;
        },
        [base, b, n](std::span<const double> x) {
          Mat h = base.hessian(x);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) h(i, j) -= 2.0 * (*b)(i, j);
          return h;
        },
        std::nullopt, f.spec().empty() ? std::string{} : f.spec() + " (recentered)");
  }

  SteinSolution out;
  out.kind = sol.kind;
  out.dim = n;
  out.f_gaussian_mean = sol.f_gaussian_mean - trace_b;

  const auto base_phi = sol.phi;
  const auto base_jac = sol.jacobian;
  out.phi = [base_phi, a, b, n](std::span<const double> x) {
    std::vector<double> v = base_phi(x);
    for (int i = 0; i < n; ++i) {
      v[static_cast<std::size_t>(i)] -= (*a)[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(i)] -= (*b)(i, j) * x[static_cast<std::size_t>(j)];
    }
    return v;
  };
  out.jacobian = [base_jac, b, n](std::span<const double> x) {
    Mat j = base_jac(x);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) j(r, c) -= (*b)(r, c);
    return j;
  };
  out.second = sol.second;

  if (sol.phi_poly) {
    VectorField phi_g = *sol.phi_poly;
    for (int i = 0; i < n; ++i) {
      phi_g[i] -= Polynomial::constant(n, (*a)[static_cast<std::size_t>(i)]);
      for (int j = 0; j < n; ++j)
        if ((*b)(i, j) != 0.0) phi_g[i] -= (*b)(i, j) * Polynomial::variable(n, j);
    }
    out.phi_poly = std::move(phi_g);
  }

  out.origin_value.assign(static_cast<std::size_t>(n), 0.0);
  out.origin_jacobian = Mat(n);
  return {std::move(g), std::move(out)};
}

// ---------------------------------------------------------------------------
// The matrix field V and the Stein residual

Mat MatrixTestField::value(std::span<const double> x) const {
  Mat v(dim);
  std::vector<double> grads(static_cast<std::size_t>(dim) * dim * dim);
  eval_all(x, v, grads);
  return v;
}

std::vector<double> MatrixTestField::entry_gradient(int i, int j, std::span<const double> x) const {
  Mat v(dim);
  std::vector<double> grads(static_cast<std::size_t>(dim) * dim * dim);
  eval_all(x, v, grads);
  std::vector<double> g(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k)
    g[static_cast<std::size_t>(k)] = grads[(static_cast<std::size_t>(i) * dim + j) * dim + k];
  return g;
}

MatrixTestField build_V(const SteinSolution& sol_g, double tol) {
  const int n = sol_g.dim;
  double origin_norm = 0.0;
  for (double v : sol_g.origin_value) origin_norm = std::max(origin_norm, std::abs(v));
  double jac_norm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) jac_norm = std::max(jac_norm, std::abs(sol_g.origin_jacobian(i, j)));
  if (origin_norm > tol || jac_norm > tol)
    throw std::invalid_argument(
        "build_V: phi(0) or grad phi(0) nonzero; run recenter_solution first");

  const auto phi = sol_g.phi;
  const auto jac = sol_g.jacobian;
  MatrixTestField v;
  v.dim = n;
  v.eval_all = [phi, jac, n](std::span<const double> x, Mat& val, std::vector<double>& grads) {
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    if (r2 == 0.0) {
      val = Mat(n);
      std::fill(grads.begin(), grads.end(), 0.0);
      return;
    }
    const std::vector<double> p = phi(x);
    const Mat j = jac(x);
    const double inv = 1.0 / r2;
    val = Mat(n);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c) val(i, c) = x[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(c)] * inv;
    // grad [V]_ic = -2 x (x_i phi_c / |x|^4) + (e_i phi_c + x_i grad phi_c) / |x|^2
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c) {
        const double vic = val(i, c);
        for (int k = 0; k < n; ++k) {
          double g = -2.0 * x[static_cast<std::size_t>(k)] * vic * inv;
          if (k == i) g += p[static_cast<std::size_t>(c)] * inv;
          g += x[static_cast<std::size_t>(i)] * j(c, k) * inv;
          grads[(static_cast<std::size_t>(i) * n + c) * n + k] = g;
        }
      }
  };
  return v;
}

MatrixTestField matrix_test_field(const MatrixField& m) {
  struct Data {
    int n;
    std::vector<Polynomial> entries;  // n*n
    std::vector<Polynomial> grads;    // n*n*n
  };
  auto data = std::make_shared<Data>();
  data->n = m.dim();
  for (int i = 0; i < data->n; ++i)
    for (int j = 0; j < data->n; ++j) {
      data->entries.push_back(m(i, j));
      for (int k = 0; k < data->n; ++k) data->grads.push_back(m(i, j).derivative(k));
    }

  MatrixTestField out;
  out.dim = data->n;
  out.eval_all = [data](std::span<const double> x, Mat& val, std::vector<double>& grads) {
    const int n = data->n;
    val = Mat(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        val(i, j) = data->entries[static_cast<std::size_t>(i) * n + j](x);
        for (int k = 0; k < n; ++k)
          grads[(static_cast<std::size_t>(i) * n + j) * n + k] =
              data->grads[(static_cast<std::size_t>(i) * n + j) * n + k](x);
      }
  };
  return out;
}

double stein_residual(const MatrixTestField& v, const QuadratureMeasure& mu) {
  const int n = mu.dim();
  const std::size_t count = mu.node_count();
  std::vector<double> moment_part(count), derivative_part(count);

#ifdef _OPENMP
#pragma omp parallel
#endif
  {
    Mat val(n);
    std::vector<double> grads(static_cast<std::size_t>(n) * n * n);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (long long p = 0; p < static_cast<long long>(count); ++p) {
      const auto x = mu.node(static_cast<std::size_t>(p));
      v.eval_all(x, val, grads);
      double s1 = 0.0, s2 = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          s1 += (x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)] - (i == j ? 1.0 : 0.0)) * val(i, j);
          s2 += x[static_cast<std::size_t>(i)] * grads[(static_cast<std::size_t>(i) * n + j) * n + j];
        }
      const double w = mu.weights()[static_cast<std::size_t>(p)];
      moment_part[static_cast<std::size_t>(p)] = w * s1;
      derivative_part[static_cast<std::size_t>(p)] = w * s2;
    }
  }

  const double lhs = tree_sum_serial(count, [&](std::size_t i) { return moment_part[i]; });
  const double rhs = tree_sum_serial(count, [&](std::size_t i) { return derivative_part[i]; });
  return std::abs(lhs - rhs);
}

std::vector<double> v_gradient_norms(const MatrixTestField& v, const QuadratureMeasure& mu) {
  const int n = mu.dim();
  const std::size_t count = mu.node_count();
  const std::size_t entries = static_cast<std::size_t>(n) * n;
  std::vector<double> contrib(count * entries);

#ifdef _OPENMP
#pragma omp parallel
#endif
  {
    Mat val(n);
    std::vector<double> grads(static_cast<std::size_t>(n) * n * n);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (long long p = 0; p < static_cast<long long>(count); ++p) {
      const auto x = mu.node(static_cast<std::size_t>(p));
      v.eval_all(x, val, grads);
      const double w = mu.weights()[static_cast<std::size_t>(p)];
      for (std::size_t e = 0; e < entries; ++e) {
        double norm_sq = 0.0;
        for (int k = 0; k < n; ++k) {
          const double g = grads[e * n + static_cast<std::size_t>(k)];
          norm_sq += g * g;
        }
        contrib[static_cast<std::size_t>(p) * entries + e] = w * norm_sq;
      }
    }
  }

  std::vector<double> norms(entries);
  for (std::size_t e = 0; e < entries; ++e)
    norms[e] = std::sqrt(tree_sum_serial(count, [&](std::size_t p) { return contrib[p * entries + e]; }));
  return norms;
}

RegularityReport regularity_check(const ScalarField& f, const SteinSolution& sol,
                                  const std::vector<std::vector<double>>& grid) {
  RegularityReport rep;
  double hess_f_grid = 0.0;
  for (const std::vector<double>& x : grid) {
    const Mat j = sol.jacobian(x);
    double jn = 0.0;
    for (int r = 0; r < sol.dim; ++r)
      for (int c = 0; c < sol.dim; ++c) jn += j(r, c) * j(r, c);
    rep.max_grad_norm = std::max(rep.max_grad_norm, std::sqrt(jn));

    const std::vector<double> t = sol.second(x);
    double tn = 0.0;
    for (double v : t) tn += v * v;
    rep.max_hess_norm = std::max(rep.max_hess_norm, std::sqrt(tn));

    if (!f.hessian_sup()) {
      const Mat h = f.hessian(x);
      double hn = 0.0;
      for (int r = 0; r < sol.dim; ++r)
        for (int c = 0; c < sol.dim; ++c) hn += h(r, c) * h(r, c);
      hess_f_grid = std::max(hess_f_grid, std::sqrt(hn));
    }
  }
  rep.hess_sup_f = f.hessian_sup().value_or(hess_f_grid);
  rep.grad_ok = rep.max_grad_norm <= 0.5 * rep.hess_sup_f + 1e-8;
  rep.hess_ok = rep.max_hess_norm <= rep.hess_sup_f + 1e-8;
  return rep;
}

std::vector<std::vector<double>> probe_grid(int n, std::size_t count) {
  std::vector<std::vector<double>> out;
  out.reserve(count);

  const Rule1D gh = gauss_hermite_1d(4);
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  const std::size_t grid = [&] {
    std::size_t g = 1;
    for (int i = 0; i < n; ++i) g *= gh.nodes.size();
    return g;
  }();
  for (std::size_t p = 0; p < grid && out.size() < count; ++p) {
    std::vector<double> x(static_cast<std::size_t>(n));
    std::size_t rem = p;
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = 1.2 * gh.nodes[rem % gh.nodes.size()];
      rem /= gh.nodes.size();
    }
    out.push_back(std::move(x));
  }

  std::mt19937 eng(0x5EED);
  const auto uniform = [&eng]() {
    const std::uint64_t a = eng() >> 5, b = eng() >> 6;
    return (a * 67108864.0 + b) * (1.0 / 9007199254740992.0);  // 53-bit in [0,1)
  };
  while (out.size() < count) {
    std::vector<double> x(static_cast<std::size_t>(n));
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = -4.0 + 8.0 * uniform();
      r2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    }
    if (r2 <= 16.0) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace pklab
