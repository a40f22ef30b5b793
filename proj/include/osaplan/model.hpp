#pragma once

#include <optional>
#include <vector>

#include "osaplan/types.hpp"

namespace osaplan {

/// Flattens per-agent digits into a joint index, row-major with digits[0]
/// most significant. Used for joint actions and joint observations alike.
int joint_index(const std::vector<int>& digits, const std::vector<int>& sizes);

/// Inverse of joint_index.
std::vector<int> split_index(int joint, const std::vector<int>& sizes);

/// One entry of the sparse transition/observation kernel:
/// probability of reaching next_state while the agents jointly observe
/// joint_obs, given the (state, joint action) the entry is filed under.
struct TransitionOutcome {
  int next_state = 0;
  int joint_obs = 0;
  Scalar prob = 0.0;
};

/// Finite-horizon Dec-POMDP with joint transition/observation kernel
/// P(s', o | s, a) and additive per-agent rewards.
///
/// Conventions, used consistently by every consumer:
///  - joint action index  = joint_index(per-agent actions, num_actions)
///  - joint observation   = joint_index(per-agent observations, num_observations)
///  - kernel row for (s, ja) lives at kernel[s * num_joint_actions() + ja]
///
/// Instances are treated as immutable once validate() has passed; all
/// consumers take the model by const reference.
struct DecPomdpModel {
  int num_agents = 0;
  int num_states = 0;
  std::vector<int> num_actions;       ///< per agent
  std::vector<int> num_observations;  ///< per agent

  /// Sparse kernel rows, one per (state, joint action); entries with zero
  /// probability are omitted. Each row sums to 1 within kProbTol.
  std::vector<std::vector<TransitionOutcome>> kernel;

  /// Joint reward, num_states x num_joint_actions.
  MatrixX joint_reward;

  /// Per-agent rewards, same shape as joint_reward; they sum to the joint
  /// reward entrywise (checked by validate()).
  std::vector<MatrixX> agent_rewards;

  /// Set when the state dynamics are action-independent: row-stochastic
  /// S x S matrix with P(s'|s). Required by propagate_belief.
  std::optional<MatrixX> state_transition;

  int num_joint_actions() const;
  int num_joint_observations() const;

  const std::vector<TransitionOutcome>& outcomes(int state, int joint_action) const;

  /// Checks dimensions, probability normalization, reward additivity and,
  /// when state_transition is present, its consistency with the kernel
  /// marginals. Throws ValidationError on the first violation.
  void validate() const;
};

/// Distribution over joint states.
struct Belief {
  VectorX probs;

  static Belief uniform(int num_states);
  static Belief point_mass(int num_states, int state);

  /// Throws ValidationError unless probs is a distribution (entries in
  /// [0,1] summing to 1 within kProbTol).
  void validate() const;
};

/// One-step belief update under the action-independent state dynamics:
/// b'(s') = sum_s b(s) P(s'|s). Throws UnsupportedModelError when the model
/// carries no state_transition, DimensionError on length mismatch.
Belief propagate_belief(const Belief& belief, const DecPomdpModel& model);

}  // namespace osaplan
