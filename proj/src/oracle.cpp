#include "osaplan/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "osaplan/errors.hpp"
#include "osaplan/value.hpp"

namespace osaplan {

std::vector<PolicyTreePtr> enumerate_trees(int num_actions, int num_observations,
                                           int depth) {
  if (num_actions < 1 || num_observations < 1) {
    throw ValidationError("enumerate_trees: need positive action/observation counts");
  }
  if (depth < 1) throw ValidationError("enumerate_trees: depth must be >= 1");

  std::vector<PolicyTreePtr> level;
  for (int a = 0; a < num_actions; ++a) level.push_back(make_leaf(a));
  for (int d = 2; d <= depth; ++d) {
    const std::vector<PolicyTreePtr> below = std::move(level);
    level.clear();
    std::vector<std::size_t> assignment(num_observations, 0);
    for (int a = 0; a < num_actions; ++a) {
      std::fill(assignment.begin(), assignment.end(), 0);
      while (true) {
        std::vector<PolicyTreePtr> children(num_observations);
        for (int o = 0; o < num_observations; ++o) children[o] = below[assignment[o]];
        level.push_back(make_node(a, std::move(children)));
        int digit = num_observations - 1;
        while (digit >= 0 && ++assignment[digit] == below.size()) {
          assignment[digit] = 0;
          --digit;
        }
        if (digit < 0) break;
      }
    }
  }
  return level;
}

namespace {

/// Weighted occupancy over (state, agent-0 node) pairs as seen from agent
/// 1, who knows only its own observation history.
using Occupancy = std::map<std::pair<int, const PolicyTree*>, Scalar>;

/// Exact value of agent 1's best response to a fixed agent-0 tree, given
/// the unnormalized occupancy at the current decision point.
Scalar best_response(const Occupancy& occupancy, int depth,
                     const DecPomdpModel& model,
                     const std::vector<std::vector<int>>& obs_split) {
  const int num_a1 = model.num_actions[1];
  const int num_o1 = model.num_observations[1];

  Scalar best = -std::numeric_limits<Scalar>::infinity();
  for (int a1 = 0; a1 < num_a1; ++a1) {
    Scalar value = 0.0;
    std::vector<Occupancy> next(num_o1);
    for (const auto& [key, weight] : occupancy) {
      const auto [s, node0] = key;
      const int ja = joint_index({node0->action, a1}, model.num_actions);
      value += weight * model.joint_reward(s, ja);
      if (depth > 1) {
        for (const TransitionOutcome& out : model.outcomes(s, ja)) {
          const int o0 = obs_split[out.joint_obs][0];
          const int o1 = obs_split[out.joint_obs][1];
          const PolicyTree* child0 = node0->children[o0].get();
          next[o1][{out.next_state, child0}] += weight * out.prob;
        }
      }
    }
    if (depth > 1) {
      // Agent 1 branches only on its own observation; agent 0's node and
      // the state stay entangled inside the occupancy.
      for (int o1 = 0; o1 < num_o1; ++o1) {
        if (!next[o1].empty()) {
          value += best_response(next[o1], depth - 1, model, obs_split);
        }
      }
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace

Scalar exhaustive_optimum(const DecPomdpModel& model, const Belief& b0, int horizon) {
  model.validate();
  b0.validate();
  if (model.num_agents != 2) {
    throw UnsupportedModelError("exhaustive_optimum: two-agent models only");
  }
  if (b0.probs.size() != model.num_states) {
    throw DimensionError("exhaustive_optimum: belief length does not match num_states");
  }
  if (horizon < 1) throw ValidationError("exhaustive_optimum: horizon must be >= 1");
  if (horizon > 3) {
    throw ValidationError(
        "exhaustive_optimum: refusing horizons above 3; the enumeration grows "
        "doubly exponentially and is only intended as a small-horizon oracle");
  }

  std::vector<std::vector<int>> obs_split;
  for (int jo = 0; jo < model.num_joint_observations(); ++jo) {
    obs_split.push_back(split_index(jo, model.num_observations));
  }

  const std::vector<PolicyTreePtr> trees_0 =
      enumerate_trees(model.num_actions[0], model.num_observations[0], horizon);

  Scalar best = -std::numeric_limits<Scalar>::infinity();
  if (horizon <= 2) {
    // Small enough for the full cross product of both agents' trees.
    const std::vector<PolicyTreePtr> trees_1 =
        enumerate_trees(model.num_actions[1], model.num_observations[1], horizon);
    PolicyEvaluator evaluator(model);
    for (const PolicyTreePtr& t0 : trees_0) {
      for (const PolicyTreePtr& t1 : trees_1) {
        const VectorX& v = evaluator.joint_values({t0.get(), t1.get()});
        best = std::max(best, v.dot(b0.probs));
      }
    }
    return best;
  }

  for (const PolicyTreePtr& t0 : trees_0) {
    Occupancy initial;
    for (int s = 0; s < model.num_states; ++s) {
      if (b0.probs[s] > 0.0) initial[{s, t0.get()}] = b0.probs[s];
    }
    best = std::max(best, best_response(initial, horizon, model, obs_split));
  }
  return best;
}

OracleReport oracle_report(const DecPomdpModel& model, const Belief& b0,
                           const SolverConfig& config) {
  OracleReport report;
  report.optimum = exhaustive_optimum(model, b0, config.horizon);

  const CandidatePool pool = mbdp_solve(model, b0, config);
  report.solver_best = evaluate_at_belief(pool.best_at(b0).joint_value, b0);
  report.gap = report.optimum - report.solver_best;

  const auto count_trees = [&](int actions, int obs) {
    std::int64_t n = actions;
    for (int d = 2; d <= config.horizon; ++d) {
      std::int64_t pow = 1;
      for (int o = 0; o < obs; ++o) pow *= n;
      n = actions * pow;
    }
    return n;
  };
  report.joint_policies = count_trees(model.num_actions[0], model.num_observations[0]) *
                          count_trees(model.num_actions[1], model.num_observations[1]);
  return report;
}

}  // namespace osaplan
