#include "osaplan/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "osaplan/errors.hpp"

namespace osaplan {

namespace {

constexpr Scalar kTieTol = 1e-9;

/// num_actions * num_trees^num_obs without overflow; values beyond the cap
/// are reported as cap+1.
std::int64_t backup_size(std::int64_t num_actions, std::int64_t num_trees,
                         int num_obs, std::int64_t cap) {
  std::int64_t total = num_actions;
  for (int o = 0; o < num_obs; ++o) {
    if (num_trees != 0 && total > cap / num_trees) return cap + 1;
    total *= num_trees;
  }
  return total;
}

}  // namespace

void SolverConfig::validate() const {
  if (horizon < 1) throw ValidationError("solver: horizon must be >= 1");
  if (max_trees < 1) throw ValidationError("solver: max_trees must be >= 1");
  if (trials < 1) throw ValidationError("solver: trials must be >= 1");
  if (!(belief_jitter >= 0.0 && belief_jitter < 1.0)) {
    throw ValidationError("solver: belief_jitter must lie in [0,1)");
  }
  if (max_backup_trees < 1) {
    throw ValidationError("solver: max_backup_trees must be >= 1");
  }
}

bool CandidatePool::insert(JointPolicy policy, ValueVector joint_value,
                           std::vector<ValueVector> agent_values) {
  std::vector<int> key;
  key.reserve(policy.trees.size());
  for (const PolicyTreePtr& tree : policy.trees) key.push_back(interner_.intern(tree));
  auto [it, inserted] = seen_.try_emplace(key, static_cast<int>(entries_.size()));
  if (!inserted) return false;

  CandidateEntry entry;
  entry.policy = std::move(policy);
  entry.joint_value = std::move(joint_value);
  entry.agent_values = std::move(agent_values);
  entry.identity = static_cast<int>(entries_.size()) + 1;
  entries_.push_back(std::move(entry));
  return true;
}

const CandidateEntry& CandidatePool::by_identity(int identity) const {
  for (const CandidateEntry& entry : entries_) {
    if (entry.identity == identity) return entry;
  }
  throw ValidationError("pool: unknown policy identity " + std::to_string(identity));
}

const CandidateEntry& CandidatePool::best_at(const Belief& belief) const {
  if (entries_.empty()) throw ValidationError("pool: empty");
  const CandidateEntry* best = nullptr;
  Scalar best_value = -std::numeric_limits<Scalar>::infinity();
  for (const CandidateEntry& entry : entries_) {
    const Scalar v = evaluate_at_belief(entry.joint_value, belief);
    if (v > best_value) {
      best_value = v;
      best = &entry;
    }
  }
  return *best;
}

void CandidatePool::set_throughput_optimal(int identity) {
  by_identity(identity);  // existence check
  throughput_optimal_ = identity;
}

std::vector<PolicyTreePtr> exhaustive_backup(const std::vector<PolicyTreePtr>& trees,
                                             int agent, const DecPomdpModel& model) {
  if (trees.empty()) {
    throw ValidationError("exhaustive_backup: no trees to back up");
  }
  if (agent < 0 || agent >= model.num_agents) {
    throw ValidationError("exhaustive_backup: agent index out of range");
  }
  const int num_obs = model.num_observations[agent];
  const int num_actions = model.num_actions[agent];
  const auto n = static_cast<std::int64_t>(trees.size());
  constexpr std::int64_t kHardCap = std::int64_t{1} << 40;
  if (backup_size(num_actions, n, num_obs, kHardCap) > kHardCap) {
    throw ResourceLimitError("exhaustive_backup: result would exceed 2^40 trees");
  }
  for (const PolicyTreePtr& tree : trees) {
    if (!tree) throw StructureError("exhaustive_backup: null tree");
    if (tree->depth != trees.front()->depth) {
      throw StructureError("exhaustive_backup: input trees of unequal depth");
    }
  }

  std::vector<PolicyTreePtr> out;
  out.reserve(static_cast<std::size_t>(backup_size(num_actions, n, num_obs, kHardCap)));
  std::vector<std::size_t> assignment(num_obs, 0);
  for (int a = 0; a < num_actions; ++a) {
    std::fill(assignment.begin(), assignment.end(), 0);
    while (true) {
      std::vector<PolicyTreePtr> children(num_obs);
      for (int o = 0; o < num_obs; ++o) children[o] = trees[assignment[o]];
      out.push_back(make_node(a, std::move(children)));

      // Advance the mixed-radix counter; observation 0 is the most
      // significant digit, so the last observation varies fastest.
      int digit = num_obs - 1;
      while (digit >= 0 && ++assignment[digit] == trees.size()) {
        assignment[digit] = 0;
        --digit;
      }
      if (digit < 0) break;
    }
  }
  return out;
}

std::vector<Belief> precompute_beliefs(const Belief& b0, const DecPomdpModel& model,
                                       int horizon, Scalar jitter,
                                       std::mt19937_64& rng) {
  if (horizon < 1) throw ValidationError("precompute_beliefs: horizon must be >= 1");
  if (!(jitter >= 0.0 && jitter < 1.0)) {
    throw ValidationError("precompute_beliefs: jitter must lie in [0,1)");
  }
  b0.validate();

  std::vector<Belief> beliefs(horizon);
  Belief current = b0;
  // Depth-`horizon` subtrees execute at slot 1 (belief b0); every level
  // below runs one propagation step later.
  for (int depth = horizon; depth >= 1; --depth) {
    beliefs[depth - 1] = current;
    if (depth > 1) current = propagate_belief(current, model);
  }

  if (jitter > 0.0) {
    std::uniform_real_distribution<Scalar> noise(-jitter, jitter);
    for (Belief& b : beliefs) {
      VectorX perturbed = b.probs;
      for (Eigen::Index s = 0; s < perturbed.size(); ++s) {
        perturbed[s] = std::max(Scalar{0}, perturbed[s] + noise(rng));
      }
      const Scalar total = perturbed.sum();
      if (total > 0.0) b.probs = perturbed / total;
    }
  }
  return beliefs;
}

namespace {

/// select_best with a caller-supplied evaluator so the solver can reuse one
/// memo table across all backup rounds of a trial.
std::pair<std::vector<PolicyTreePtr>, std::vector<PolicyTreePtr>> select_best_with(
    PolicyEvaluator& evaluator, const std::vector<PolicyTreePtr>& trees_i,
    const std::vector<PolicyTreePtr>& trees_j, const std::vector<Belief>& beliefs,
    int max_trees, std::mt19937_64* tie_break_rng) {
  if (trees_i.empty() || trees_j.empty()) {
    throw ValidationError("select_best: empty candidate set");
  }
  if (beliefs.empty()) throw ValidationError("select_best: empty belief list");
  if (max_trees < 1) throw ValidationError("select_best: max_trees must be >= 1");
  for (const Belief& b : beliefs) b.validate();

  std::vector<std::size_t> remaining_i(trees_i.size()), remaining_j(trees_j.size());
  for (std::size_t i = 0; i < trees_i.size(); ++i) remaining_i[i] = i;
  for (std::size_t j = 0; j < trees_j.size(); ++j) remaining_j[j] = j;

  std::vector<PolicyTreePtr> sel_i, sel_j;
  for (int k = 0; k < max_trees; ++k) {
    if (remaining_i.empty() || remaining_j.empty()) break;
    const Belief& b = beliefs[k % beliefs.size()];

    Scalar best = -std::numeric_limits<Scalar>::infinity();
    for (std::size_t i : remaining_i) {
      for (std::size_t j : remaining_j) {
        const VectorX& v =
            evaluator.joint_values({trees_i[i].get(), trees_j[j].get()});
        best = std::max(best, v.dot(b.probs));
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> ties;
    for (std::size_t i : remaining_i) {
      for (std::size_t j : remaining_j) {
        const VectorX& v =
            evaluator.joint_values({trees_i[i].get(), trees_j[j].get()});
        if (v.dot(b.probs) >= best - kTieTol) ties.emplace_back(i, j);
      }
    }
    std::pair<std::size_t, std::size_t> pick = ties.front();
    if (tie_break_rng != nullptr && ties.size() > 1) {
      std::uniform_int_distribution<std::size_t> die(0, ties.size() - 1);
      pick = ties[die(*tie_break_rng)];
    }

    sel_i.push_back(trees_i[pick.first]);
    sel_j.push_back(trees_j[pick.second]);
    std::erase(remaining_i, pick.first);
    std::erase(remaining_j, pick.second);
  }
  return {std::move(sel_i), std::move(sel_j)};
}

}  // namespace

std::pair<std::vector<PolicyTreePtr>, std::vector<PolicyTreePtr>> select_best(
    const std::vector<PolicyTreePtr>& trees_i,
    const std::vector<PolicyTreePtr>& trees_j, const std::vector<Belief>& beliefs,
    int max_trees, const DecPomdpModel& model, std::mt19937_64* tie_break_rng) {
  if (model.num_agents != 2) {
    throw UnsupportedModelError("select_best: joint selection needs a two-agent model");
  }
  PolicyEvaluator evaluator(model);
  return select_best_with(evaluator, trees_i, trees_j, beliefs, max_trees,
                          tie_break_rng);
}

CandidatePool mbdp_solve(const DecPomdpModel& model, const Belief& b0,
                         const SolverConfig& config) {
  config.validate();
  model.validate();
  b0.validate();
  if (model.num_agents != 2) {
    throw UnsupportedModelError("mbdp_solve: only two-agent models are supported");
  }
  if (b0.probs.size() != model.num_states) {
    throw DimensionError("mbdp_solve: belief length does not match num_states");
  }

  const int T = config.horizon;
  CandidatePool pool;
  for (int trial = 0; trial < config.trials; ++trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(trial), 0x6d626470u};
    std::mt19937_64 rng(seq);

    // One heuristic belief per selection round and level: the k-th
    // selection at a level uses the k-th precomputed sequence's belief for
    // that level (all identical when jitter is 0).
    std::vector<std::vector<Belief>> level_beliefs(T);
    for (int k = 0; k < config.max_trees; ++k) {
      std::vector<Belief> seq_k =
          precompute_beliefs(b0, model, T, config.belief_jitter, rng);
      for (int d = 0; d < T; ++d) level_beliefs[d].push_back(std::move(seq_k[d]));
    }

    std::vector<PolicyTreePtr> q_i, q_j;
    for (int a = 0; a < model.num_actions[0]; ++a) q_i.push_back(make_leaf(a));
    for (int a = 0; a < model.num_actions[1]; ++a) q_j.push_back(make_leaf(a));

    PolicyEvaluator evaluator(model);
    // The evaluator's memo keys are node addresses, so every tree it has
    // seen must stay alive as long as the evaluator does; otherwise a
    // later backup could recycle a freed address and hit a stale entry.
    std::vector<std::vector<PolicyTreePtr>> retained;
    for (int level = 2; level <= T; ++level) {
      for (int agent = 0; agent < 2; ++agent) {
        const auto n = static_cast<std::int64_t>(agent == 0 ? q_i.size() : q_j.size());
        const std::int64_t size =
            backup_size(model.num_actions[agent], n, model.num_observations[agent],
                        config.max_backup_trees);
        if (size > config.max_backup_trees) {
          throw ResourceLimitError(
              "mbdp_solve: backup at level " + std::to_string(level) + " needs " +
              std::to_string(size) + " trees, over the limit of " +
              std::to_string(config.max_backup_trees));
        }
      }
      std::vector<PolicyTreePtr> backed_i = exhaustive_backup(q_i, 0, model);
      std::vector<PolicyTreePtr> backed_j = exhaustive_backup(q_j, 1, model);
      std::tie(q_i, q_j) =
          select_best_with(evaluator, backed_i, backed_j,
                           level_beliefs[level - 1], config.max_trees, &rng);
      retained.push_back(std::move(backed_i));
      retained.push_back(std::move(backed_j));
    }

    for (const PolicyTreePtr& tree_i : q_i) {
      for (const PolicyTreePtr& tree_j : q_j) {
        JointPolicy delta{{tree_i, tree_j}};
        const std::vector<const PolicyTree*> roots{tree_i.get(), tree_j.get()};
        ValueVector joint{evaluator.joint_values(roots), T};
        const std::vector<VectorX>& per_agent = evaluator.agent_values(roots);
        std::vector<ValueVector> agents(per_agent.size());
        for (std::size_t i = 0; i < per_agent.size(); ++i) {
          agents[i] = ValueVector{per_agent[i], T};
        }
        pool.insert(std::move(delta), std::move(joint), std::move(agents));
      }
    }
  }

  pool.set_throughput_optimal(pool.best_at(b0).identity);
  return pool;
}

}  // namespace osaplan
