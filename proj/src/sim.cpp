#include "osaplan/sim.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include "osaplan/baselines.hpp"
#include "osaplan/errors.hpp"

namespace osaplan {

namespace {

/// Compensated (Kahan) accumulator so per-trial sums are reproducible to
/// the last bit regardless of trial count.
class KahanSum {
 public:
  void add(Scalar x) {
    const Scalar y = x - carry_;
    const Scalar t = total_ + y;
    carry_ = (t - total_) - y;
    total_ = t;
  }
  Scalar value() const { return total_; }

 private:
  Scalar total_ = 0.0;
  Scalar carry_ = 0.0;
};

int sample_index(const VectorX& probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<Scalar> uniform(0.0, 1.0);
  const Scalar u = uniform(rng);
  Scalar acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size() - 1);  // guard against rounding
}

int step_channels(int state, const std::vector<ChannelChain>& channels,
                  std::mt19937_64& rng) {
  std::uniform_real_distribution<Scalar> uniform(0.0, 1.0);
  const int C = static_cast<int>(channels.size());
  int next = 0;
  for (int c = 0; c < C; ++c) {
    const bool idle = channel_idle(state, c, C);
    const Scalar p_idle_next =
        idle ? 1.0 - channels[c].p_idle_to_busy : channels[c].p_busy_to_idle;
    const int bit = uniform(rng) < p_idle_next ? 1 : 0;
    next = (next << 1) | bit;
  }
  return next;
}

/// Per-episode decision state for whichever strategy is active.
struct StrategyState {
  // tree execution
  std::vector<const PolicyTree*> nodes;
  // myopic: private filter per user; coordinated: single shared filter
  std::vector<ChannelBeliefVector> filters;

  std::vector<int> actions(const Strategy& strategy, std::mt19937_64& rng) const {
    std::vector<int> sensed;
    if (std::holds_alternative<JointPolicyStrategy>(strategy)) {
      sensed.reserve(nodes.size());
      for (const PolicyTree* node : nodes) sensed.push_back(node->action);
    } else if (std::holds_alternative<MhStrategy>(strategy)) {
      sensed.reserve(filters.size());
      for (const ChannelBeliefVector& filter : filters) {
        sensed.push_back(sample_index(mh_channel_distribution(filter), rng));
      }
    } else if (std::holds_alternative<CoopStrategy>(strategy)) {
      const auto [ch1, ch2] = coop_joint_action(filters[0], filters[0]);
      sensed = {ch1, ch2};
    } else {
      sensed = std::get<PartitionStrategy>(strategy).channel_for_su;
    }
    return sensed;
  }

  void observe(const Strategy& strategy, const std::vector<int>& sensed,
               const SlotOutcome& outcome, const std::vector<ChannelChain>& channels) {
    if (std::holds_alternative<JointPolicyStrategy>(strategy)) {
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (outcome.obs[i] >= static_cast<int>(nodes[i]->children.size()) ||
            !nodes[i]->children[outcome.obs[i]]) {
          throw StructureError("simulate: policy tree is missing an observation branch");
        }
        nodes[i] = nodes[i]->children[outcome.obs[i]].get();
      }
    } else if (std::holds_alternative<MhStrategy>(strategy)) {
      for (std::size_t i = 0; i < filters.size(); ++i) {
        filters[i] = belief_filter_update(filters[i], sensed[i],
                                          static_cast<SenseObs>(outcome.obs[i]),
                                          channels);
      }
    } else if (std::holds_alternative<CoopStrategy>(strategy)) {
      // Both users' sensing results are exchanged and folded into the one
      // shared filter before the prediction step.
      ChannelBeliefVector shared = filters[0];
      for (std::size_t i = 0; i < sensed.size(); ++i) {
        shared = observe_posterior(std::move(shared), sensed[i],
                                   static_cast<SenseObs>(outcome.obs[i]));
      }
      filters[0] = predict_step(shared, channels);
    }
    // fixed partition: nothing to update
  }
};

void check_strategy(const RadioScenario& scenario, const SimConfig& config) {
  const int C = static_cast<int>(scenario.channels.size());
  if (const auto* tree = std::get_if<JointPolicyStrategy>(&config.strategy)) {
    if (static_cast<int>(tree->policy.trees.size()) != scenario.num_sus) {
      throw ValidationError("simulate: policy must have one tree per user");
    }
    if (tree->policy.depth() != config.horizon) {
      throw ValidationError("simulate: policy depth must equal the horizon");
    }
    for (const PolicyTreePtr& t : tree->policy.trees) validate_tree(*t, kNumSenseObs);
  } else if (std::holds_alternative<CoopStrategy>(config.strategy)) {
    if (scenario.num_sus != 2 || C != 2) {
      throw UnsupportedModelError(
          "simulate: coordinated baseline needs two users on two channels");
    }
  } else if (const auto* part = std::get_if<PartitionStrategy>(&config.strategy)) {
    if (static_cast<int>(part->channel_for_su.size()) != scenario.num_sus) {
      throw ValidationError("simulate: partition must assign every user a channel");
    }
    for (int ch : part->channel_for_su) {
      if (ch < 0 || ch >= C) {
        throw ValidationError("simulate: partition channel out of range");
      }
    }
  }
}

void replay_tree_episode(const JointPolicy& policy,
                         const std::vector<std::vector<int>>& action_log,
                         const std::vector<std::vector<int>>& obs_log) {
  // Receiver-tracking invariant: a receiver that knows only the policy and
  // an agent's observation sequence must reconstruct that agent's actions.
  for (std::size_t i = 0; i < policy.trees.size(); ++i) {
    const PolicyTree* node = policy.trees[i].get();
    for (std::size_t slot = 0; slot < action_log.size(); ++slot) {
      if (node->action != action_log[slot][i]) {
        throw std::logic_error("simulate: receiver lost track of the sender's actions");
      }
      if (slot + 1 < action_log.size()) node = node->children[obs_log[slot][i]].get();
    }
  }
}

}  // namespace

ThroughputStats simulate(const RadioScenario& scenario, const SimConfig& config) {
  scenario.validate();
  if (config.horizon < 1) throw ValidationError("simulate: horizon must be >= 1");
  if (config.trials < 1) throw ValidationError("simulate: trials must be >= 1");
  check_strategy(scenario, config);

  const int C = static_cast<int>(scenario.channels.size());
  const int M = scenario.num_sus;
  const bool is_tree = std::holds_alternative<JointPolicyStrategy>(config.strategy);
  const VectorX initial_marginals = channel_marginals(scenario.initial_belief, C);

  std::vector<KahanSum> su_sum(M), su_sumsq(M);
  KahanSum net_sum, net_sumsq, collision_sum;

  for (std::int64_t trial = 0; trial < config.trials; ++trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(trial),
                      static_cast<std::uint32_t>(trial >> 32), 0x73696d75u};
    std::mt19937_64 rng(seq);

    StrategyState state;
    if (is_tree) {
      for (const PolicyTreePtr& tree :
           std::get<JointPolicyStrategy>(config.strategy).policy.trees) {
        state.nodes.push_back(tree.get());
      }
    } else if (std::holds_alternative<MhStrategy>(config.strategy)) {
      state.filters.assign(M, ChannelBeliefVector{initial_marginals});
    } else if (std::holds_alternative<CoopStrategy>(config.strategy)) {
      state.filters.assign(1, ChannelBeliefVector{initial_marginals});
    }

    int s = sample_index(scenario.initial_belief.probs, rng);
    std::vector<Scalar> su_total(M, 0.0);
    Scalar collision_total = 0.0;
    std::vector<std::vector<int>> action_log, obs_log;

    for (int slot = 0; slot < config.horizon; ++slot) {
      const std::vector<int> sensed = state.actions(config.strategy, rng);
      const SlotOutcome outcome = slot_outcome(s, sensed, C);
      for (int i = 0; i < M; ++i) su_total[i] += outcome.rewards[i];
      collision_total += outcome.collisions;
      if (is_tree) {
        action_log.push_back(sensed);
        obs_log.push_back(outcome.obs);
      }
      if (slot + 1 < config.horizon) {
        state.observe(config.strategy, sensed, outcome, scenario.channels);
        s = step_channels(s, scenario.channels, rng);
      }
    }
    if (is_tree) {
      replay_tree_episode(std::get<JointPolicyStrategy>(config.strategy).policy,
                          action_log, obs_log);
    }

    Scalar net_total = 0.0;
    for (int i = 0; i < M; ++i) {
      su_sum[i].add(su_total[i]);
      su_sumsq[i].add(su_total[i] * su_total[i]);
      net_total += su_total[i];
    }
    net_sum.add(net_total);
    net_sumsq.add(net_total * net_total);
    collision_sum.add(collision_total);
  }

  const auto n = static_cast<Scalar>(config.trials);
  const auto stderr_of = [n](Scalar sum, Scalar sumsq) {
    if (n < 2) return Scalar{0};
    const Scalar mean = sum / n;
    const Scalar var = std::max(Scalar{0}, (sumsq - n * mean * mean) / (n - 1));
    return std::sqrt(var / n);
  };

  ThroughputStats stats;
  stats.per_su_mean.resize(M);
  stats.per_su_stderr.resize(M);
  for (int i = 0; i < M; ++i) {
    stats.per_su_mean[i] = su_sum[i].value() / n;
    stats.per_su_stderr[i] = stderr_of(su_sum[i].value(), su_sumsq[i].value());
  }
  stats.network_mean = net_sum.value() / n;
  stats.network_stderr = stderr_of(net_sum.value(), net_sumsq.value());
  stats.collision_mean = collision_sum.value() / n;
  const Scalar rmax = genie_rmax(scenario, config.horizon);
  stats.normalized_network = rmax > 0.0 ? stats.network_mean / rmax : 0.0;
  return stats;
}

std::vector<ComparisonRow> run_comparison(const RadioScenario& scenario,
                                          const ComparisonConfig& config) {
  scenario.validate();
  if (config.horizons.empty()) {
    throw ValidationError("run_comparison: no horizons given");
  }

  std::vector<ComparisonRow> rows;
  for (int horizon : config.horizons) {
    SolverConfig solver = config.solver;
    solver.horizon = horizon;
    const DecPomdpModel model = build_scenario(scenario);
    const CandidatePool pool = mbdp_solve(model, scenario.initial_belief, solver);

    QosSpec spec;
    spec.weights = config.qos_weights;
    spec.zeta = config.qos_zeta;
    spec.r_max = genie_rmax(scenario, horizon);
    const SelectionReport report = select_policy(pool, spec, scenario.initial_belief);
    const int identity = report.selected_identity.value_or(
        pool.throughput_optimal_identity());

    SimConfig sim;
    sim.horizon = horizon;
    sim.trials = config.sim_trials;
    sim.seed = config.sim_seed;

    sim.strategy = JointPolicyStrategy{pool.by_identity(identity).policy};
    rows.push_back({"mbdp", horizon, simulate(scenario, sim)});
    sim.strategy = CoopStrategy{};
    rows.push_back({"coop", horizon, simulate(scenario, sim)});
    sim.strategy = MhStrategy{};
    rows.push_back({"mh", horizon, simulate(scenario, sim)});
  }
  return rows;
}

}  // namespace osaplan
