#include "pklab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pklab/errors.hpp"
#include "pklab/hermite.hpp"

namespace pklab {

QuadratureMeasure::QuadratureMeasure(int dim, std::vector<double> nodes,
                                     std::vector<double> weights, int exactness_degree)
    : dim_(dim),
      nodes_(std::move(nodes)),
      weights_(std::move(weights)),
      exactness_degree_(exactness_degree) {
  if (dim_ < 1) throw std::invalid_argument("measure: dim < 1");
  if (weights_.empty() || nodes_.size() != weights_.size() * static_cast<std::size_t>(dim_))
    throw std::invalid_argument("measure: node/weight count mismatch");
  double sum = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw std::invalid_argument("measure: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("measure: weights do not sum to 1");
}

void QuadratureMeasure::set_provenance(std::vector<MarginalSpec> marginals, int m) {
  marginals_ = std::move(marginals);
  nodes_per_axis_ = m;
}

double MomentReport::max_residual() const {
  return std::max(std::max(centered_residual, isotropy_residual),
                  std::max(third_moment_residual, fourth_moment_residual));
}

namespace {

void check_axis_count(int n, int m, std::size_t budget) {
  if (n < 2) throw std::invalid_argument("measure: dimension must be >= 2");
  if (m < 2) throw std::invalid_argument("measure: nodes per axis must be >= 2");
  if (m % 2 != 0)
    throw std::invalid_argument("measure: nodes per axis must be even (keeps the origin off the grid)");
  double count = 1.0;
  for (int i = 0; i < n; ++i) {
    count *= m;
    if (count > static_cast<double>(budget)) {
      std::ostringstream msg;
      msg << "measure: m^n = " << m << "^" << n << " exceeds the node budget of " << budget
          << "; lower m or n";
      throw resource_error(msg.str());
    }
  }
}

QuadratureMeasure tensorize(const std::vector<Rule1D>& axes, int exactness) {
  const int n = static_cast<int>(axes.size());
  std::size_t count = 1;
  for (const Rule1D& r : axes) count *= r.nodes.size();

  std::vector<double> nodes(count * static_cast<std::size_t>(n));
  std::vector<double> weights(count, 1.0);
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t p = 0; p < count; ++p) {
    for (int ax = 0; ax < n; ++ax) {
      const std::size_t i = idx[static_cast<std::size_t>(ax)];
      nodes[p * n + static_cast<std::size_t>(ax)] = axes[static_cast<std::size_t>(ax)].nodes[i];
      weights[p] *= axes[static_cast<std::size_t>(ax)].weights[i];
    }
    for (int ax = n - 1; ax >= 0; --ax) {
      std::size_t& i = idx[static_cast<std::size_t>(ax)];
      if (++i < axes[static_cast<std::size_t>(ax)].nodes.size()) break;
      i = 0;
    }
  }
  double sum = 0.0;
  for (double w : weights) sum += w;
  for (double& w : weights) w /= sum;
  return QuadratureMeasure(n, std::move(nodes), std::move(weights), exactness);
}

}  // namespace

QuadratureMeasure build_gauss_hermite(int n, int m, std::size_t node_budget) {
  check_axis_count(n, m, node_budget);
  std::vector<Rule1D> axes(static_cast<std::size_t>(n), gauss_hermite_1d(m));
  QuadratureMeasure mu = tensorize(axes, 2 * m - 1);
  mu.set_provenance(std::vector<MarginalSpec>(static_cast<std::size_t>(n), MarginalSpec::normal()), m);
  return mu;
}

QuadratureMeasure build_product(const std::vector<MarginalSpec>& specs, int m,
                                std::size_t node_budget) {
  const int n = static_cast<int>(specs.size());
  check_axis_count(n, m, node_budget);

  const Rule1D gh = gauss_hermite_1d(m);
  std::vector<Rule1D> axes;
  axes.reserve(specs.size());
  int exactness = 2 * m - 1;

  for (const MarginalSpec& spec : specs) {
    Rule1D axis = gh;
    switch (spec.kind) {
      case MarginalSpec::Kind::standard_normal:
        break;
      case MarginalSpec::Kind::hermite6: {
        const double cap = max_delta_h6();
        if (!(std::abs(spec.param) < cap)) {
          std::ostringstream msg;
          msg << "hermite6 delta " << spec.param << " out of range; positivity requires |delta| < "
              << cap;
          throw std::invalid_argument(msg.str());
        }
        for (std::size_t i = 0; i < axis.nodes.size(); ++i) {
          const double ratio = 1.0 + spec.param * hermite_he(6, axis.nodes[i]);
          if (ratio < 0.0)
            throw std::invalid_argument("hermite6: density ratio negative at a quadrature node");
          axis.weights[i] *= ratio;
        }
        // reweighting spends 6 polynomial degrees of the rule
        exactness = std::min(exactness, 2 * m - 7);
        break;
      }
      case MarginalSpec::Kind::gaussian_var: {
        if (!(spec.param > 0.0))
          throw std::invalid_argument("gaussian_var: sigma2 must be positive");
        const double sigma = std::sqrt(spec.param);
        for (double& x : axis.nodes) x *= sigma;
        break;
      }
    }
    axes.push_back(std::move(axis));
  }

  QuadratureMeasure mu = tensorize(axes, exactness);
  mu.set_provenance(specs, m);
  return mu;
}

MomentReport check_moments(const QuadratureMeasure& mu, double tol) {
  const int n = mu.dim();
  MomentReport rep;
  rep.tolerance = tol;
  rep.exactness_warning = mu.exactness_degree() < 4;

  for (int i = 0; i < n; ++i) {
    const double v = integrate(mu, [&](std::span<const double> x) { return x[i]; });
    rep.centered_residual = std::max(rep.centered_residual, std::abs(v));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = integrate(mu, [&](std::span<const double> x) { return x[i] * x[j]; });
      rep.isotropy_residual = std::max(rep.isotropy_residual, std::abs(v - (i == j ? 1.0 : 0.0)));
    }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        const double v =
            integrate(mu, [&](std::span<const double> x) { return x[i] * x[j] * x[k]; });
        rep.third_moment_residual = std::max(rep.third_moment_residual, std::abs(v));
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = integrate(mu, [&](std::span<const double> x) {
        return (x[i] * x[i] + x[j] * x[j]) * x[j] * x[j];
      });
      rep.fourth_moment_residual = std::max(rep.fourth_moment_residual, std::abs(v - 4.0));
    }

  rep.passes = rep.max_residual() <= tol;
  return rep;
}

double max_delta_h6() {
  // He6 is even; its global minimum sits at x^2 = 5 + sqrt(10). Bracketed
  // grid scan on [0, 6], then golden-section refinement.
  const auto he6 = [](double x) { return hermite_he(6, x); };
  double best_x = 0.0, best = he6(0.0);
  for (int i = 1; i <= 6000; ++i) {
    const double x = i * 1e-3;
    const double v = he6(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  double a = best_x - 2e-3, b = best_x + 2e-3;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  while (b - a > 1e-13) {
    if (he6(c) < he6(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  return 1.0 / std::abs(he6(0.5 * (a + b)));
}

double integrate_poly(const QuadratureMeasure& mu, const Polynomial& p) {
  return integrate(mu, [&](std::span<const double> x) { return p(x); });
}

}  // namespace pklab
