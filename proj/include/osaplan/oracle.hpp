#pragma once

#include <cstdint>

#include "osaplan/model.hpp"
#include "osaplan/policy.hpp"
#include "osaplan/solver.hpp"
#include "osaplan/types.hpp"

namespace osaplan {

/// All depth-`depth` policy trees for an agent with the given action and
/// observation counts, in a deterministic order (actions outermost, child
/// assignments mixed-radix with observation 0 most significant).
std::vector<PolicyTreePtr> enumerate_trees(int num_actions, int num_observations,
                                           int depth);

/// Exact optimum over every decentralized joint policy of the given
/// horizon, for two-agent models. Horizons 1 and 2 enumerate the full
/// cross product of both agents' trees; horizon 3 enumerates agent 0's
/// trees and computes agent 1's exact best decentralized response by
/// dynamic programming over (state, agent-0 node) distributions. Horizons
/// above 3 are refused with ValidationError: the enumeration is
/// intentionally guarded, not approximated.
Scalar exhaustive_optimum(const DecPomdpModel& model, const Belief& b0, int horizon);

struct OracleReport {
  Scalar optimum = 0.0;     ///< brute-force optimum
  Scalar solver_best = 0.0; ///< best pooled value at b0 from mbdp_solve
  Scalar gap = 0.0;         ///< optimum - solver_best (>= 0 up to roundoff)
  std::int64_t joint_policies = 0;  ///< number of joint policies covered
};

/// Runs both the brute-force enumeration and the memory-bounded solver on
/// the same problem and reports the gap.
OracleReport oracle_report(const DecPomdpModel& model, const Belief& b0,
                           const SolverConfig& config);

}  // namespace osaplan
