#include "osaplan/pipeline.hpp"

#include <utility>

#include "osaplan/errors.hpp"
#include "osaplan/value.hpp"

namespace osaplan {

SolveOutcome run_solve(const RunConfig& config) {
  const DecPomdpModel model = build_scenario(config.scenario);
  const Belief& b0 = config.scenario.initial_belief;

  SolveOutcome outcome;
  outcome.pool = mbdp_solve(model, b0, config.solver);
  outcome.r_max = genie_rmax(config.scenario, config.solver.horizon);

  QosSpec spec;
  spec.weights = config.qos_weights;
  spec.zeta = config.qos_zeta;
  spec.r_max = outcome.r_max;
  outcome.selection = select_policy(outcome.pool, spec, b0);

  outcome.library.scenario_hash = scenario_hash(config.scenario);
  outcome.library.selected_identity = outcome.selection.selected_identity.value_or(0);
  for (const CandidateEntry& entry : outcome.pool.entries()) {
    LibraryEntry stored;
    stored.identity = entry.identity;
    stored.horizon = config.solver.horizon;
    stored.qos_weights.assign(config.qos_weights.data(),
                              config.qos_weights.data() + config.qos_weights.size());
    stored.zeta = config.qos_zeta;
    stored.policy = entry.policy;
    for (const ValueVector& v : entry.agent_values) {
      stored.r_values.push_back(evaluate_at_belief(v, b0));
    }
    stored.joint_value = evaluate_at_belief(entry.joint_value, b0);
    outcome.library.entries.push_back(std::move(stored));
  }
  return outcome;
}

Strategy baseline_strategy(const std::string& name, const RadioScenario& scenario) {
  if (name == "mh") return MhStrategy{};
  if (name == "coop") return CoopStrategy{};
  if (name == "partition") {
    PartitionStrategy partition;
    const int C = static_cast<int>(scenario.channels.size());
    for (int i = 0; i < scenario.num_sus; ++i) {
      partition.channel_for_su.push_back(i % C);
    }
    return partition;
  }
  throw ValidationError("unknown baseline '" + name +
                        "' (expected mh, coop or partition)");
}

ThroughputStats run_simulate_library(const RunConfig& config,
                                     const PolicyLibrary& library, int identity) {
  const std::string expected = scenario_hash(config.scenario);
  if (library.scenario_hash != expected) {
    throw ValidationError("library was solved for scenario " + library.scenario_hash +
                          " but the config describes scenario " + expected +
                          "; refusing to replay the policy");
  }
  const LibraryEntry& entry = library.by_identity(identity);

  SimConfig sim;
  sim.horizon = entry.horizon;
  sim.trials = config.sim_trials;
  sim.seed = config.sim_seed;
  sim.strategy = JointPolicyStrategy{entry.policy};
  return simulate(config.scenario, sim);
}

ThroughputStats run_simulate_baseline(const RunConfig& config,
                                      const std::string& baseline) {
  SimConfig sim;
  sim.horizon = config.solver.horizon;
  sim.trials = config.sim_trials;
  sim.seed = config.sim_seed;
  sim.strategy = baseline_strategy(baseline, config.scenario);
  return simulate(config.scenario, sim);
}

OracleReport run_oracle(const RunConfig& config) {
  const DecPomdpModel model = build_scenario(config.scenario);
  return oracle_report(model, config.scenario.initial_belief, config.solver);
}

std::vector<ComparisonRow> run_compare(const RunConfig& config) {
  ComparisonConfig comparison;
  comparison.horizons = config.compare_horizons;
  if (comparison.horizons.empty()) {
    throw ValidationError("compare: config lists no horizons");
  }
  comparison.solver = config.solver;
  comparison.qos_weights = config.qos_weights;
  comparison.qos_zeta = config.qos_zeta;
  comparison.sim_trials = config.sim_trials;
  comparison.sim_seed = config.sim_seed;
  return run_comparison(config.scenario, comparison);
}

}  // namespace osaplan
