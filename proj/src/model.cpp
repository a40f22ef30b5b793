#include "osaplan/model.hpp"

#include <cmath>
#include <string>

#include "osaplan/errors.hpp"

namespace osaplan {

int joint_index(const std::vector<int>& digits, const std::vector<int>& sizes) {
  if (digits.size() != sizes.size()) {
    throw DimensionError("joint_index: digit/size count mismatch");
  }
  int idx = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (sizes[i] <= 0) throw ValidationError("joint_index: non-positive size");
    if (digits[i] < 0 || digits[i] >= sizes[i]) {
      throw ValidationError("joint_index: digit out of range");
    }
    idx = idx * sizes[i] + digits[i];
  }
  return idx;
}

std::vector<int> split_index(int joint, const std::vector<int>& sizes) {
  std::vector<int> digits(sizes.size(), 0);
  for (std::size_t i = sizes.size(); i-- > 0;) {
    if (sizes[i] <= 0) throw ValidationError("split_index: non-positive size");
    digits[i] = joint % sizes[i];
    joint /= sizes[i];
  }
  if (joint != 0) throw ValidationError("split_index: joint index out of range");
  return digits;
}

int DecPomdpModel::num_joint_actions() const {
  int n = 1;
  for (int a : num_actions) n *= a;
  return n;
}

int DecPomdpModel::num_joint_observations() const {
  int n = 1;
  for (int o : num_observations) n *= o;
  return n;
}

const std::vector<TransitionOutcome>& DecPomdpModel::outcomes(int state,
                                                              int joint_action) const {
  return kernel.at(static_cast<std::size_t>(state) * num_joint_actions() + joint_action);
}

void DecPomdpModel::validate() const {
  if (num_agents < 1) throw ValidationError("model: need at least one agent");
  if (num_states < 1) throw ValidationError("model: need at least one state");
  if (static_cast<int>(num_actions.size()) != num_agents ||
      static_cast<int>(num_observations.size()) != num_agents) {
    throw ValidationError("model: per-agent action/observation counts must match num_agents");
  }
  for (int a : num_actions) {
    if (a < 1) throw ValidationError("model: every agent needs at least one action");
  }
  for (int o : num_observations) {
    if (o < 1) throw ValidationError("model: every agent needs at least one observation");
  }

  const int n_ja = num_joint_actions();
  const int n_jo = num_joint_observations();
  if (kernel.size() != static_cast<std::size_t>(num_states) * n_ja) {
    throw ValidationError("model: kernel must have one row per (state, joint action)");
  }
  for (std::size_t row = 0; row < kernel.size(); ++row) {
    Scalar total = 0.0;
    for (const TransitionOutcome& out : kernel[row]) {
      if (out.next_state < 0 || out.next_state >= num_states) {
        throw ValidationError("model: kernel next_state out of range");
      }
      if (out.joint_obs < 0 || out.joint_obs >= n_jo) {
        throw ValidationError("model: kernel joint_obs out of range");
      }
      if (out.prob < -kProbTol || out.prob > 1.0 + kProbTol) {
        throw ValidationError("model: kernel probability outside [0,1]");
      }
      total += out.prob;
    }
    if (std::abs(total - 1.0) > kProbTol) {
      throw ValidationError("model: kernel row " + std::to_string(row) +
                            " sums to " + std::to_string(total) + ", expected 1");
    }
  }

  if (joint_reward.rows() != num_states || joint_reward.cols() != n_ja) {
    throw ValidationError("model: joint_reward must be num_states x num_joint_actions");
  }
  if (static_cast<int>(agent_rewards.size()) != num_agents) {
    throw ValidationError("model: need one reward table per agent");
  }
  MatrixX sum = MatrixX::Zero(num_states, n_ja);
  for (const MatrixX& r : agent_rewards) {
    if (r.rows() != num_states || r.cols() != n_ja) {
      throw ValidationError("model: agent reward table has wrong shape");
    }
    sum += r;
  }
  if ((sum - joint_reward).cwiseAbs().maxCoeff() > kProbTol) {
    throw ValidationError("model: agent rewards do not sum to the joint reward");
  }

  if (state_transition) {
    const MatrixX& t = *state_transition;
    if (t.rows() != num_states || t.cols() != num_states) {
      throw ValidationError("model: state_transition must be num_states x num_states");
    }
    // Every kernel row's next-state marginal must agree with the declared
    // action-independent dynamics.
    for (int s = 0; s < num_states; ++s) {
      for (int ja = 0; ja < n_ja; ++ja) {
        VectorX marginal = VectorX::Zero(num_states);
        for (const TransitionOutcome& out : outcomes(s, ja)) {
          marginal[out.next_state] += out.prob;
        }
        if ((marginal - t.row(s).transpose()).cwiseAbs().maxCoeff() > kProbTol) {
          throw ValidationError(
              "model: state_transition disagrees with kernel marginal at state " +
              std::to_string(s));
        }
      }
    }
  }
}

Belief Belief::uniform(int num_states) {
  if (num_states < 1) throw ValidationError("belief: need at least one state");
  Belief b;
  b.probs = VectorX::Constant(num_states, 1.0 / num_states);
  return b;
}

Belief Belief::point_mass(int num_states, int state) {
  if (num_states < 1) throw ValidationError("belief: need at least one state");
  if (state < 0 || state >= num_states) {
    throw ValidationError("belief: point-mass state out of range");
  }
  Belief b;
  b.probs = VectorX::Zero(num_states);
  b.probs[state] = 1.0;
  return b;
}

void Belief::validate() const {
  if (probs.size() == 0) throw ValidationError("belief: empty");
  Scalar total = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs[i] < -kProbTol || probs[i] > 1.0 + kProbTol) {
      throw ValidationError("belief: entry outside [0,1]");
    }
    total += probs[i];
  }
  if (std::abs(total - 1.0) > kProbTol) {
    throw ValidationError("belief: entries sum to " + std::to_string(total));
  }
}

Belief propagate_belief(const Belief& belief, const DecPomdpModel& model) {
  if (!model.state_transition) {
    throw UnsupportedModelError(
        "propagate_belief: model has no action-independent state dynamics");
  }
  if (belief.probs.size() != model.num_states) {
    throw DimensionError("propagate_belief: belief length does not match num_states");
  }
  Belief next;
  next.probs = model.state_transition->transpose() * belief.probs;
  return next;
}

}  // namespace osaplan
