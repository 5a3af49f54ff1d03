#pragma once

#include <stdexcept>

namespace pklab {

/// Requested construction would exceed a resource limit (node budget).
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A measure fails the moment assumption where a result requires it.
struct hypothesis_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A measure-spec string does not conform to the grammar.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pklab
