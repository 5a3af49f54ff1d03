#include "pklab/zolotarev.hpp"

#include <cmath>
#include <stdexcept>

#include "pklab/errors.hpp"

namespace pklab {

std::vector<CosineTest> default_theta_grid(int n, int count, double lo, double hi) {
  if (count < 2 || lo <= 0.0 || hi <= lo)
    throw std::invalid_argument("default_theta_grid: need count >= 2 and 0 < lo < hi");
  std::vector<std::vector<double>> directions;
  for (int ax = 0; ax < n; ++ax) {
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(ax)] = 1.0;
    directions.push_back(std::move(e));
  }
  directions.emplace_back(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));

  std::vector<CosineTest> grid;
  grid.reserve(directions.size() * static_cast<std::size_t>(count));
  const double ratio = std::log(hi / lo) / (count - 1);
  for (const std::vector<double>& dir : directions)
    for (int k = 0; k < count; ++k) {
      const double mag = lo * std::exp(ratio * k);
      CosineTest t;
      t.theta.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) t.theta[static_cast<std::size_t>(i)] = mag * dir[static_cast<std::size_t>(i)];
      grid.push_back(std::move(t));
    }
  return grid;
}

namespace {

double cosine_transform(const QuadratureMeasure& mu, const std::vector<double>& theta) {
  return integrate(mu, [&](std::span<const double> x) {
    double dot = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) dot += theta[i] * x[i];
    return std::cos(dot);
  });
}

}  // namespace

double zol2_lower(const QuadratureMeasure& mu, const QuadratureMeasure& nu,
                  const std::vector<CosineTest>& thetas) {
  if (mu.dim() != nu.dim()) throw std::invalid_argument("zol2_lower: dimension mismatch");
  if (thetas.empty()) throw std::invalid_argument("zol2_lower: empty theta grid");

  double best = 0.0;
  for (const CosineTest& t : thetas) {
    double norm_sq = 0.0;
    for (double v : t.theta) norm_sq += v * v;
    if (norm_sq == 0.0) throw std::invalid_argument("zol2_lower: zero theta");
    const double diff = cosine_transform(nu, t.theta) - cosine_transform(mu, t.theta);
    best = std::max(best, std::abs(diff) / norm_sq);
  }
  return best;
}

double stein_upper_bound(double cpk, int n, double rhs_constant) {
  if (cpk < 1.0 - 1e-8)
    throw std::invalid_argument("stein_upper_bound: cpk below 1 (moment assumption gives cpk >= 1)");
  const double c = std::max(cpk, 1.0);
  return rhs_constant * static_cast<double>(n) * n * std::sqrt(c * (c - 1.0));
}

StabilityReport stability_report(const QuadratureMeasure& mu, int degree,
                                 const std::vector<CosineTest>& thetas, double slack,
                                 double rhs_constant) {
  const MomentReport moments = check_moments(mu);
  if (!moments.passes)
    throw hypothesis_error("stability_report: measure fails the moment assumption");
  if (mu.nodes_per_axis() <= 0)
    throw std::invalid_argument("stability_report: measure lacks construction provenance");

  const CpkEstimate est = cpk_lower_bound(mu, degree);
  const QuadratureMeasure gamma = build_gauss_hermite(mu.dim(), mu.nodes_per_axis());

  StabilityReport rep;
  rep.dim = mu.dim();
  rep.degree = degree;
  rep.theta_grid_size = static_cast<int>(thetas.size());
  rep.cpk_lower = est.value;
  rep.zol2_lower = zol2_lower(mu, gamma, thetas);
  rep.rhs_constant = rhs_constant;
  rep.rhs = stein_upper_bound(est.value, mu.dim(), rhs_constant);
  rep.slack = slack;
  rep.consistent = rep.zol2_lower <= rep.rhs + slack;
  return rep;
}

}  // namespace pklab
