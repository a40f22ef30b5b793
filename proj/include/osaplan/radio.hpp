#pragma once

#include <utility>
#include <vector>

#include "osaplan/model.hpp"
#include "osaplan/types.hpp"

namespace osaplan {

/// Two-state Markov chain for one licensed channel. State 0 = busy
/// (primary user active), state 1 = idle.
struct ChannelChain {
  Scalar p_busy_to_idle = 0.0;  ///< P(idle  | busy)
  Scalar p_idle_to_busy = 0.0;  ///< P(busy | idle)

  void validate() const;
};

/// Stationary distribution (pi_busy, pi_idle) of the chain. Throws
/// ValidationError for the degenerate chain with both switch probabilities
/// zero (every distribution is stationary, none is canonical).
std::pair<Scalar, Scalar> steady_state(const ChannelChain& chain);

/// What one secondary user can see after sensing a channel.
enum SenseObs : int {
  kObsBusy = 0,           ///< channel occupied by the primary user
  kObsFreeAck = 1,        ///< idle channel, transmission acknowledged
  kObsFreeCollision = 2,  ///< idle channel, collided with another secondary
};
inline constexpr int kNumSenseObs = 3;

/// Joint channel-state indexing: channel 0 occupies the most significant
/// bit, so with C channels state s encodes channel c as bit (C-1-c).
int num_channel_states(int num_channels);
int channel_state_index(const std::vector<int>& bits);
bool channel_idle(int state, int channel, int num_channels);
int idle_count(int state, int num_channels);

/// Spectrum-access scenario: independent channel chains, a number of
/// secondary users (each senses exactly one channel per slot and transmits
/// when it is idle), and the initial joint-state belief.
struct RadioScenario {
  std::vector<ChannelChain> channels;
  int num_sus = 0;
  Belief initial_belief;

  void validate() const;
};

/// Joint state transition matrix: the product of the independent per
/// channel chains.
MatrixX joint_transition_matrix(const std::vector<ChannelChain>& channels);

/// Product of the per-channel stationary distributions.
Belief steady_state_belief(const std::vector<ChannelChain>& channels);

/// Point mass on the joint state given per-channel bits (1 = idle).
Belief point_mass_belief(int num_channels, const std::vector<int>& bits);

/// Per-channel idle marginals of a joint-state belief.
VectorX channel_marginals(const Belief& belief, int num_channels);

/// Everything that happens within one slot once each user has committed to
/// a channel: per-user observation and reward, their sum, and the number of
/// idle channels on which two or more users collided.
struct SlotOutcome {
  std::vector<int> obs;        ///< SenseObs per user
  std::vector<Scalar> rewards; ///< 1 for a successful (uncontested) transmission
  Scalar joint_reward = 0.0;
  int collisions = 0;
};

SlotOutcome slot_outcome(int state, const std::vector<int>& sensed_channels,
                         int num_channels);

/// Dec-POMDP for the scenario. Agent i's actions are the channel indices
/// (sense channel a, then transmit iff it was found idle); observations are
/// SenseObs. Observations and rewards are deterministic given the current
/// state and the joint channel choice; state dynamics are the
/// action-independent product chain, so the model carries state_transition
/// and supports belief propagation.
DecPomdpModel build_scenario(const RadioScenario& scenario);

/// Clairvoyant network throughput bound over `horizon` slots: a genie that
/// knows every channel state in advance serves min(num_sus, #idle) packets
/// per slot, so the bound is the sum of E[min(num_sus, #idle_t)] under the
/// propagated belief. No decentralized policy can beat it.
Scalar genie_rmax(const RadioScenario& scenario, int horizon);

}  // namespace osaplan
