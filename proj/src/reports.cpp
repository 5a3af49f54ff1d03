#include "pklab/reports.hpp"

#include <algorithm>
#include <cstdio>

#include "pklab/measure_spec.hpp"

namespace pklab {

namespace {

std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json marginal_json(const MarginalSpec& m) {
  switch (m.kind) {
    case MarginalSpec::Kind::standard_normal:
      return Json{{"kind", "standard_normal"}};
    case MarginalSpec::Kind::hermite6:
      return Json{{"kind", "hermite6"}, {"delta", m.param}};
    case MarginalSpec::Kind::gaussian_var:
      return Json{{"kind", "gaussian_var"}, {"sigma2", m.param}};
  }
  return Json{};
}

}  // namespace

Json moment_report_json(const MomentReport& rep) {
  return Json{{"centered_residual", rep.centered_residual},
              {"isotropy_residual", rep.isotropy_residual},
              {"third_moment_residual", rep.third_moment_residual},
              {"fourth_moment_residual", rep.fourth_moment_residual},
              {"passes", rep.passes},
              {"tolerance", rep.tolerance},
              {"exactness_warning", rep.exactness_warning}};
}

Json measure_dump_json(const QuadratureMeasure& mu, const MomentReport& rep) {
  bool gaussian = true;
  for (const MarginalSpec& m : mu.marginals())
    if (m.kind != MarginalSpec::Kind::standard_normal) gaussian = false;

  Json params = Json::array();
  for (const MarginalSpec& m : mu.marginals()) params.push_back(marginal_json(m));

  return Json{{"dim", mu.dim()},
              {"m", mu.nodes_per_axis()},
              {"kind", gaussian ? "gaussian" : "product"},
              {"params", params},
              {"node_count", mu.node_count()},
              {"spec", canonical_measure_spec(mu.marginals())},
              {"moment_report", moment_report_json(rep)}};
}

Json cpk_report_json(const std::string& measure_spec, const CpkEstimate& est,
                     const MomentReport& moments, bool gram_exact, double witness_rayleigh) {
  return Json{{"measure_spec", measure_spec},
              {"degree", est.degree},
              {"basis_size", est.basis_size},
              {"cpk_lower", est.value},
              {"witness_coeffs", est.witness_coeffs},
              {"residuals",
               Json{{"moment", moment_report_json(moments)},
                    {"gram_exact", gram_exact},
                    {"witness_rayleigh_gap", std::abs(witness_rayleigh - est.value)}}}};
}

Json stein_report_json(const std::string& f_spec, const SteinSolution& sol,
                       double poisson_residual, const RegularityReport& reg,
                       const std::vector<double>& v_gradient_norms, double stein_residual_value) {
  return Json{{"f_spec", f_spec},
              {"solver_kind", sol.kind == SteinSolution::Kind::hermite_spectral
                                  ? "hermite_spectral"
                                  : "semigroup_quadrature"},
              {"poisson_residual", poisson_residual},
              {"lipschitz_check",
               Json{{"max_grad_norm", reg.max_grad_norm},
                    {"max_hess_norm", reg.max_hess_norm},
                    {"hess_sup_f", reg.hess_sup_f},
                    {"grad_ok", reg.grad_ok},
                    {"hess_ok", reg.hess_ok}}},
              {"V_gradient_norms", v_gradient_norms},
              {"stein_residual", stein_residual_value}};
}

Json stability_report_json(const std::string& measure_spec, const StabilityReport& rep,
                           const std::string& theta_grid_spec) {
  return Json{{"measure_spec", measure_spec},
              {"degree", rep.degree},
              {"cpk_lower", rep.cpk_lower},
              {"zol2_lower", rep.zol2_lower},
              {"rhs_constant", rep.rhs_constant},
              {"rhs", rep.rhs},
              {"consistent", rep.consistent},
              {"slack", rep.slack},
              {"theta_grid", Json{{"spec", theta_grid_spec}, {"size", rep.theta_grid_size}}}};
}

std::string sweep_csv(std::vector<SweepRow> rows) {
  std::sort(rows.begin(), rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.delta < b.delta; });
  std::string out = "delta,cpk_lower,zol2_lower,rhs,consistent\r\n";
  for (const SweepRow& r : rows) {
    out += csv_double(r.delta);
    out += ',';
    out += csv_double(r.cpk_lower);
    out += ',';
    out += csv_double(r.zol2_lower);
    out += ',';
    out += csv_double(r.rhs);
    out += ',';
    out += r.consistent ? "true" : "false";
    out += "\r\n";
  }
  return out;
}

}  // namespace pklab
