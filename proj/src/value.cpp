#include "osaplan/value.hpp"

#include <functional>

#include "osaplan/errors.hpp"

namespace osaplan {

Scalar evaluate_at_belief(const ValueVector& v, const Belief& belief) {
  if (v.values.size() != belief.probs.size()) {
    throw DimensionError("evaluate_at_belief: value/belief length mismatch");
  }
  return v.values.dot(belief.probs);
}

std::size_t PolicyEvaluator::TupleHash::operator()(
    const std::vector<const PolicyTree*>& key) const {
  std::size_t h = key.size();
  for (const PolicyTree* node : key) {
    h = h * 1099511628211ULL ^ std::hash<const void*>()(node);
  }
  return h;
}

PolicyEvaluator::PolicyEvaluator(const DecPomdpModel& model) : model_(model) {
  obs_split_.reserve(model_.num_joint_observations());
  for (int jo = 0; jo < model_.num_joint_observations(); ++jo) {
    obs_split_.push_back(split_index(jo, model_.num_observations));
  }
}

int PolicyEvaluator::joint_action_of(const std::vector<const PolicyTree*>& roots) const {
  if (static_cast<int>(roots.size()) != model_.num_agents) {
    throw DimensionError("evaluate: need one tree per agent");
  }
  std::vector<int> actions(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (!roots[i]) throw StructureError("evaluate: null tree");
    if (roots[i]->depth != roots.front()->depth) {
      throw StructureError("evaluate: agent trees of unequal depth");
    }
    if (roots[i]->action < 0 || roots[i]->action >= model_.num_actions[i]) {
      throw StructureError("evaluate: action out of range for agent");
    }
    actions[i] = roots[i]->action;
  }
  return joint_index(actions, model_.num_actions);
}

const PolicyTree* PolicyEvaluator::child_of(const PolicyTree* node, int obs) const {
  if (obs >= static_cast<int>(node->children.size()) || !node->children[obs]) {
    throw StructureError("evaluate: node is missing a child for an observation");
  }
  return node->children[obs].get();
}

const VectorX& PolicyEvaluator::joint_values(
    const std::vector<const PolicyTree*>& roots) {
  auto hit = joint_memo_.find(roots);
  if (hit != joint_memo_.end()) return hit->second;

  const int ja = joint_action_of(roots);
  const int depth = roots.front()->depth;
  VectorX v = model_.joint_reward.col(ja);
  if (depth > 1) {
    // Lazily resolved child tuples, one per joint observation seen in the
    // kernel rows below.
    std::vector<const VectorX*> child_vals(model_.num_joint_observations(), nullptr);
    for (int s = 0; s < model_.num_states; ++s) {
      for (const TransitionOutcome& out : model_.outcomes(s, ja)) {
        const VectorX*& vals = child_vals[out.joint_obs];
        if (vals == nullptr) {
          std::vector<const PolicyTree*> children(roots.size());
          for (std::size_t i = 0; i < roots.size(); ++i) {
            children[i] = child_of(roots[i], obs_split_[out.joint_obs][i]);
          }
          vals = &joint_values(children);
        }
        v[s] += out.prob * (*vals)[out.next_state];
      }
    }
  }
  return joint_memo_.emplace(roots, std::move(v)).first->second;
}

const std::vector<VectorX>& PolicyEvaluator::agent_values(
    const std::vector<const PolicyTree*>& roots) {
  auto hit = agent_memo_.find(roots);
  if (hit != agent_memo_.end()) return hit->second;

  const int ja = joint_action_of(roots);
  const int depth = roots.front()->depth;
  std::vector<VectorX> v(model_.num_agents);
  for (int i = 0; i < model_.num_agents; ++i) v[i] = model_.agent_rewards[i].col(ja);
  if (depth > 1) {
    std::vector<const std::vector<VectorX>*> child_vals(model_.num_joint_observations(),
                                                        nullptr);
    for (int s = 0; s < model_.num_states; ++s) {
      for (const TransitionOutcome& out : model_.outcomes(s, ja)) {
        const std::vector<VectorX>*& vals = child_vals[out.joint_obs];
        if (vals == nullptr) {
          std::vector<const PolicyTree*> children(roots.size());
          for (std::size_t i = 0; i < roots.size(); ++i) {
            children[i] = child_of(roots[i], obs_split_[out.joint_obs][i]);
          }
          vals = &agent_values(children);
        }
        for (int i = 0; i < model_.num_agents; ++i) {
          v[i][s] += out.prob * (*vals)[i][out.next_state];
        }
      }
    }
  }
  return agent_memo_.emplace(roots, std::move(v)).first->second;
}

namespace {

std::vector<const PolicyTree*> raw_roots(const JointPolicy& delta) {
  std::vector<const PolicyTree*> roots;
  roots.reserve(delta.trees.size());
  for (const PolicyTreePtr& tree : delta.trees) {
    if (!tree) throw StructureError("joint policy: null agent tree");
    roots.push_back(tree.get());
  }
  return roots;
}

}  // namespace

ValueVector joint_value_vector(const JointPolicy& delta, const DecPomdpModel& model) {
  PolicyEvaluator evaluator(model);
  ValueVector v;
  v.depth = delta.depth();
  v.values = evaluator.joint_values(raw_roots(delta));
  return v;
}

std::vector<ValueVector> per_agent_value_vectors(const JointPolicy& delta,
                                                 const DecPomdpModel& model) {
  PolicyEvaluator evaluator(model);
  const int depth = delta.depth();
  const std::vector<VectorX>& per_agent = evaluator.agent_values(raw_roots(delta));
  std::vector<ValueVector> out(per_agent.size());
  for (std::size_t i = 0; i < per_agent.size(); ++i) {
    out[i].values = per_agent[i];
    out[i].depth = depth;
  }
  return out;
}

}  // namespace osaplan
