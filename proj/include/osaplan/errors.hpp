#pragma once

#include <stdexcept>

namespace osaplan {

/// Invalid configuration or model data: bad probabilities, non-positive
/// counts, malformed weights, mismatched scenario inputs.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Length mismatch between quantities that must share a dimension
/// (value vector vs. belief, weights vs. agents, ...).
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Malformed policy tree: missing or null child, ragged subtree depths,
/// wrong branching factor for the agent's observation set.
struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The operation requires a model property that does not hold, e.g.
/// action-independent dynamics or a two-agent model.
struct UnsupportedModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A configured resource guard would be exceeded (exhaustive backup too
/// large for the tree budget).
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace osaplan
