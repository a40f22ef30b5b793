#pragma once

#include <utility>
#include <vector>

#include "osaplan/radio.hpp"
#include "osaplan/types.hpp"

namespace osaplan {

/// Per-channel idle beliefs maintained by a secondary user between slots
/// (omega_c = believed probability that channel c is idle now).
struct ChannelBeliefVector {
  VectorX omega;

  void validate() const;
};

/// Myopic randomized sensing: channel c is sensed with probability
/// proportional to its idle belief, p_c = omega_c / sum(omega). A belief
/// vector of all zeros falls back to the uniform distribution.
VectorX mh_channel_distribution(const ChannelBeliefVector& beliefs);

/// Coordinated two-user assignment on two channels: the pair of distinct
/// channels maximizing the summed idle beliefs, i.e. (0,1) when
/// omega1[0] + omega2[1] >= omega1[1] + omega2[0], else (1,0). Ties keep
/// (0,1). Both users evaluate the same rule on exchanged beliefs, so no
/// collision is possible.
std::pair<int, int> coop_joint_action(const ChannelBeliefVector& user1,
                                      const ChannelBeliefVector& user2);

/// Collapses the sensed channel's belief to what the observation proved:
/// 0 after seeing the primary user, 1 after any idle observation (ack or
/// collision both reveal an idle channel). Unsensed channels are untouched.
ChannelBeliefVector observe_posterior(ChannelBeliefVector beliefs, int sensed_channel,
                                      SenseObs obs);

/// One Markov prediction step per channel:
/// omega' = omega (1 - p_idle_to_busy) + (1 - omega) p_busy_to_idle.
ChannelBeliefVector predict_step(const ChannelBeliefVector& beliefs,
                                 const std::vector<ChannelChain>& channels);

/// Full between-slot update: posterior on the sensed channel, then one
/// prediction step on every channel.
ChannelBeliefVector belief_filter_update(const ChannelBeliefVector& beliefs,
                                         int sensed_channel, SenseObs obs,
                                         const std::vector<ChannelChain>& channels);

}  // namespace osaplan
