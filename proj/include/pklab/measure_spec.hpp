#pragma once

#include <string>
#include <vector>

#include "pklab/measure.hpp"

namespace pklab {

/// Parsed measure description; builds the quadrature at a chosen resolution.
///
/// Grammar:
///   gaussian(dim=N)
///   product(<marginal> [x K] {, <marginal> [x K]} [, dim=N])
///   <marginal> := standard_normal | hermite6(delta=D) | gaussian_var(s1[,s2,...])
/// gaussian_var with several arguments contributes one factor per argument.
struct MeasureSpec {
  std::vector<MarginalSpec> marginals;
  std::string canonical;

  int dim() const { return static_cast<int>(marginals.size()); }
  bool is_gaussian() const;
  QuadratureMeasure build(int m, std::size_t node_budget = kDefaultNodeBudget) const;
};

/// Parses the grammar above. Throws parse_error naming the offending token;
/// hermite6 deltas at or beyond the positivity threshold are rejected with
/// the computed threshold in the message.
MeasureSpec parse_measure_spec(const std::string& text);

/// Normalized spec string for a marginal list (inverse of the parser).
std::string canonical_measure_spec(const std::vector<MarginalSpec>& marginals);

}  // namespace pklab
