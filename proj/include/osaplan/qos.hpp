#pragma once

#include <optional>

#include "osaplan/model.hpp"
#include "osaplan/solver.hpp"
#include "osaplan/types.hpp"

namespace osaplan {

/// Proportional-fairness target: per-user throughputs R_i should sit within
/// zeta of the ray R_i = weights_i * t for a common t in (0, upper], where
/// upper = (r_max + M*zeta) / sum(weights) caps the ray parameter at what
/// the clairvoyant network bound leaves attainable.
struct QosSpec {
  VectorX weights;      ///< strictly positive, one per user
  Scalar zeta = 0.0;    ///< per-user slack, >= 0
  Scalar r_max = 0.0;   ///< clairvoyant network bound for the horizon

  void validate(int num_agents) const;
};

/// Outcome of the fairness test for one reward vector. The feasible t-range
/// is the intersection of the per-user intervals [(R_i - zeta)/w_i,
/// (R_i + zeta)/w_i] clipped to (0, upper]; `witness_t` is its midpoint
/// when non-empty. `gap` is how far the interval intersection misses
/// closing (0 when satisfied) and is the ranking key for diagnostics.
struct QosDecision {
  bool satisfied = false;
  Scalar witness_t = 0.0;
  Scalar lower = 0.0;  ///< max_i (R_i - zeta)/w_i
  Scalar upper = 0.0;  ///< min(min_i (R_i + zeta)/w_i, ray cap)
  Scalar gap = 0.0;
};

QosDecision qos_satisfied(const VectorX& rewards, const QosSpec& spec);

/// Result of scanning a candidate pool for the fairness-constrained best
/// policy. When no candidate satisfies the spec, `selected` is empty and
/// closest_identity/closest_gap describe the least-infeasible entry.
struct SelectionReport {
  std::optional<int> selected_identity;
  Scalar selected_value = 0.0;   ///< joint value at b0 of the selected entry
  VectorX selected_rewards;      ///< per-user values at b0 of the selected entry
  Scalar witness_t = 0.0;
  int closest_identity = 0;
  Scalar closest_gap = 0.0;
};

/// Among pool entries whose per-user values at b0 satisfy the spec, selects
/// the one with maximal joint value at b0 (ties to the smallest identity).
/// Throws ValidationError on an empty pool or when the spec does not match
/// the entries' agent count.
SelectionReport select_policy(const CandidatePool& pool, const QosSpec& spec,
                              const Belief& b0);

}  // namespace osaplan
