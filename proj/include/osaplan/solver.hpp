#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "osaplan/model.hpp"
#include "osaplan/policy.hpp"
#include "osaplan/types.hpp"
#include "osaplan/value.hpp"

namespace osaplan {

/// Memory-bounded solver parameters.
struct SolverConfig {
  int horizon = 1;
  int max_trees = 3;       ///< trees kept per agent after each selection step
  int trials = 1;          ///< independent solver runs pooled together
  std::uint64_t seed = 0;  ///< master seed; trial t derives its own stream
  Scalar belief_jitter = 0.0;  ///< additive noise on heuristic beliefs, in [0,1)

  /// Hard cap on the per-agent size of one exhaustive backup,
  /// |A| * max_trees^|O|; exceeding it raises ResourceLimitError.
  std::int64_t max_backup_trees = 1'000'000;

  void validate() const;
};

/// Candidate joint policy with its exact value vectors. `identity` is the
/// stable serial number used to address the entry from the outside (policy
/// library files, CLI); identities are assigned in insertion order starting
/// at 1 and never reused.
struct CandidateEntry {
  JointPolicy policy;
  ValueVector joint_value;
  std::vector<ValueVector> agent_values;
  int identity = 0;
};

/// Deduplicated pool of candidate joint policies accumulated across solver
/// trials. Structural duplicates (same trees up to sharing) are dropped on
/// insert, keeping the first occurrence so identities are reproducible.
class CandidatePool {
 public:
  /// Returns false when an equal entry is already present.
  bool insert(JointPolicy policy, ValueVector joint_value,
              std::vector<ValueVector> agent_values);

  const std::vector<CandidateEntry>& entries() const { return entries_; }
  const CandidateEntry& by_identity(int identity) const;

  /// Entry maximizing the joint value at the belief; ties go to the
  /// smallest identity. Throws ValidationError on an empty pool.
  const CandidateEntry& best_at(const Belief& belief) const;

  /// Identity of the designated throughput-optimal entry (0 = unset).
  int throughput_optimal_identity() const { return throughput_optimal_; }
  void set_throughput_optimal(int identity);

 private:
  TreeInterner interner_;
  std::map<std::vector<int>, int> seen_;  // canonical tree ids -> entry index
  std::vector<CandidateEntry> entries_;
  int throughput_optimal_ = 0;
};

/// All depth-(t+1) trees for one agent obtained by prepending each action
/// to every assignment of the given depth-t trees to that agent's
/// observations. Output order: action-major, then assignments in
/// mixed-radix order with the observation-0 digit most significant; with
/// n input trees the result has num_actions * n^num_observations entries.
std::vector<PolicyTreePtr> exhaustive_backup(const std::vector<PolicyTreePtr>& trees,
                                             int agent, const DecPomdpModel& model);

/// Top-down belief heuristic: beliefs[d-1] is the state distribution in
/// force when a depth-d subtree starts executing, i.e. b0 propagated
/// (horizon - d) steps through the action-independent dynamics. With
/// jitter > 0 each level's belief is perturbed by additive uniform noise of
/// magnitude jitter and renormalized (consuming rng); with jitter == 0 the
/// rng is untouched.
std::vector<Belief> precompute_beliefs(const Belief& b0, const DecPomdpModel& model,
                                       int horizon, Scalar jitter,
                                       std::mt19937_64& rng);

/// Joint selection step for two agents: repeatedly (max_trees times) picks
/// the candidate pair maximizing the exact joint value at the next belief
/// from `beliefs` (cycling in order), moving both trees into the selected
/// sets without replacement. Value ties within 1e-9 break toward the
/// lexicographically smallest (i, j) input pair, or uniformly among the
/// tied pairs when tie_break_rng is given. Selection stops early when
/// either side runs out of trees.
std::pair<std::vector<PolicyTreePtr>, std::vector<PolicyTreePtr>> select_best(
    const std::vector<PolicyTreePtr>& trees_i,
    const std::vector<PolicyTreePtr>& trees_j, const std::vector<Belief>& beliefs,
    int max_trees, const DecPomdpModel& model,
    std::mt19937_64* tie_break_rng = nullptr);

/// Memory-bounded dynamic programming for two-agent models.
///
/// Each trial seeds its own rng stream from (seed, trial), draws max_trees
/// heuristic belief sequences, and runs horizon-1 rounds of exhaustive
/// backup followed by joint selection, starting from the depth-1 trees (one
/// per action). The trial's max_trees^2 surviving pairs are evaluated
/// exactly and inserted into the shared pool; after all trials the pool's
/// best entry at b0 is marked throughput-optimal.
///
/// Throws UnsupportedModelError for models with num_agents != 2 and
/// ResourceLimitError when a backup would exceed config.max_backup_trees.
CandidatePool mbdp_solve(const DecPomdpModel& model, const Belief& b0,
                         const SolverConfig& config);

}  // namespace osaplan
