#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "osaplan/policy.hpp"
#include "osaplan/qos.hpp"
#include "osaplan/radio.hpp"
#include "osaplan/solver.hpp"
#include "osaplan/types.hpp"

namespace osaplan {

/// Execute a solved joint policy tree (depth must equal the horizon).
struct JointPolicyStrategy {
  JointPolicy policy;
};

/// Decentralized myopic baseline: every user keeps a private channel-belief
/// filter and senses a channel drawn from mh_channel_distribution.
struct MhStrategy {};

/// Coordinated baseline: users share one belief filter (both observations
/// are folded in each slot) and apply coop_joint_action. Two users on two
/// channels only.
struct CoopStrategy {};

/// Fixed channel assignment, e.g. user i always senses channel_for_su[i].
struct PartitionStrategy {
  std::vector<int> channel_for_su;
};

using Strategy =
    std::variant<JointPolicyStrategy, MhStrategy, CoopStrategy, PartitionStrategy>;

struct SimConfig {
  int horizon = 1;
  std::int64_t trials = 1;
  std::uint64_t seed = 0;  ///< master seed; trial t derives its own stream
  Strategy strategy;
};

/// Monte Carlo throughput estimates over all trials. Standard errors are
/// sample standard deviations divided by sqrt(trials).
struct ThroughputStats {
  VectorX per_su_mean;
  VectorX per_su_stderr;
  Scalar network_mean = 0.0;
  Scalar network_stderr = 0.0;
  Scalar normalized_network = 0.0;  ///< network_mean / genie_rmax
  Scalar collision_mean = 0.0;      ///< collided idle channels per trial
};

/// Runs `trials` independent episodes of `horizon` slots. Each trial seeds
/// its own rng stream from (seed, trial), samples the initial state from
/// the scenario belief, and steps states channel-by-channel. Tree
/// strategies additionally replay each episode's observation sequence
/// against the policy after the fact and abort on any action mismatch
/// (receiver-tracking self-check).
ThroughputStats simulate(const RadioScenario& scenario, const SimConfig& config);

/// One strategy's results at one horizon; `strategy` is the CSV label
/// ("mbdp", "coop", "mh").
struct ComparisonRow {
  std::string strategy;
  int horizon = 0;
  ThroughputStats stats;
};

struct ComparisonConfig {
  std::vector<int> horizons;
  SolverConfig solver;   ///< per-horizon solves; the horizon field is overridden
  VectorX qos_weights;
  Scalar qos_zeta = 0.0;
  std::int64_t sim_trials = 1;
  std::uint64_t sim_seed = 0;
};

/// For each horizon: solve, pick the fairness-constrained policy (falling
/// back to the throughput-optimal entry when the constraint is infeasible),
/// then simulate it against the coordinated and myopic baselines with the
/// same simulation seed, so all strategies face common random numbers.
/// Rows come out in horizon order as (mbdp, coop, mh).
std::vector<ComparisonRow> run_comparison(const RadioScenario& scenario,
                                          const ComparisonConfig& config);

}  // namespace osaplan
