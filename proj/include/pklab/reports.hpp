#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pklab/measure.hpp"
#include "pklab/spectral.hpp"
#include "pklab/stein.hpp"
#include "pklab/zolotarev.hpp"

namespace pklab {

using Json = nlohmann::json;

Json moment_report_json(const MomentReport& rep);

/// Serialized measure dump: {dim, m, kind, params, node_count, moment_report}.
Json measure_dump_json(const QuadratureMeasure& mu, const MomentReport& rep);

/// {measure_spec, degree, basis_size, cpk_lower, witness_coeffs, residuals}.
Json cpk_report_json(const std::string& measure_spec, const CpkEstimate& est,
                     const MomentReport& moments, bool gram_exact, double witness_rayleigh);

/// {f_spec, solver_kind, poisson_residual, lipschitz_check, V_gradient_norms,
///  stein_residual}.
Json stein_report_json(const std::string& f_spec, const SteinSolution& sol,
                       double poisson_residual, const RegularityReport& reg,
                       const std::vector<double>& v_gradient_norms, double stein_residual_value);

/// {measure_spec, degree, cpk_lower, zol2_lower, rhs_constant, rhs,
///  consistent, theta_grid}.
Json stability_report_json(const std::string& measure_spec, const StabilityReport& rep,
                           const std::string& theta_grid_spec);

struct SweepRow {
  double delta = 0.0;
  double cpk_lower = 0.0;
  double zol2_lower = 0.0;
  double rhs = 0.0;
  bool consistent = false;
};

/// RFC-4180 CSV with header (delta, cpk_lower, zol2_lower, rhs, consistent),
/// 17-significant-digit decimals, rows sorted by delta ascending.
std::string sweep_csv(std::vector<SweepRow> rows);

}  // namespace pklab
