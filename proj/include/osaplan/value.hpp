#pragma once

#include <unordered_map>
#include <vector>

#include "osaplan/model.hpp"
#include "osaplan/policy.hpp"
#include "osaplan/types.hpp"

namespace osaplan {

/// Per-state expected value of executing some depth-t joint policy:
/// one entry per joint state.
struct ValueVector {
  VectorX values;
  int depth = 1;
};

/// V(b) = <values, b>. Throws DimensionError on length mismatch.
Scalar evaluate_at_belief(const ValueVector& v, const Belief& belief);

/// Exact policy evaluation by the backward recursion
///
///   v_delta(s) = R(s, a) + sum_{s', o} P(s', o | s, a) v_children(o)(s'),
///
/// where a is the joint action at the roots and children(o) descends every
/// agent's tree along its private component of the joint observation o.
///
/// The evaluator memoizes per-subtree-tuple value vectors, so evaluating
/// many candidate pairs that share subtrees (the solver's main loop) costs
/// amortized one recursion per distinct tuple. Keys are node identities;
/// trees must outlive the evaluator.
///
/// Joint and per-agent evaluations are independent recursions over the
/// joint and per-agent reward tables; the per-agent route is never derived
/// from the joint one (their sum agreeing is a checked invariant, not an
/// implementation shortcut).
class PolicyEvaluator {
 public:
  explicit PolicyEvaluator(const DecPomdpModel& model);

  /// Joint value vector of the tuple of per-agent subtrees.
  const VectorX& joint_values(const std::vector<const PolicyTree*>& roots);

  /// Per-agent value vectors of the tuple, one per agent.
  const std::vector<VectorX>& agent_values(const std::vector<const PolicyTree*>& roots);

 private:
  struct TupleHash {
    std::size_t operator()(const std::vector<const PolicyTree*>& key) const;
  };
  using JointMemo =
      std::unordered_map<std::vector<const PolicyTree*>, VectorX, TupleHash>;
  using AgentMemo = std::unordered_map<std::vector<const PolicyTree*>,
                                       std::vector<VectorX>, TupleHash>;

  int joint_action_of(const std::vector<const PolicyTree*>& roots) const;
  const PolicyTree* child_of(const PolicyTree* node, int obs) const;

  const DecPomdpModel& model_;
  std::vector<std::vector<int>> obs_split_;  // joint obs -> per-agent obs
  JointMemo joint_memo_;
  AgentMemo agent_memo_;
};

/// Value vector of a joint policy under the model (fresh evaluator).
ValueVector joint_value_vector(const JointPolicy& delta, const DecPomdpModel& model);

/// Per-agent value vectors of a joint policy (fresh evaluator).
std::vector<ValueVector> per_agent_value_vectors(const JointPolicy& delta,
                                                 const DecPomdpModel& model);

}  // namespace osaplan
