#include "osaplan/baselines.hpp"

#include <cmath>

#include "osaplan/errors.hpp"

namespace osaplan {

void ChannelBeliefVector::validate() const {
  if (omega.size() == 0) throw ValidationError("channel beliefs: empty");
  for (Eigen::Index c = 0; c < omega.size(); ++c) {
    if (!(omega[c] >= -kProbTol && omega[c] <= 1.0 + kProbTol)) {
      throw ValidationError("channel beliefs: entry outside [0,1]");
    }
  }
}

VectorX mh_channel_distribution(const ChannelBeliefVector& beliefs) {
  beliefs.validate();
  const Scalar total = beliefs.omega.sum();
  if (total <= 0.0) {
    return VectorX::Constant(beliefs.omega.size(), 1.0 / beliefs.omega.size());
  }
  return beliefs.omega / total;
}

std::pair<int, int> coop_joint_action(const ChannelBeliefVector& user1,
                                      const ChannelBeliefVector& user2) {
  user1.validate();
  user2.validate();
  if (user1.omega.size() != 2 || user2.omega.size() != 2) {
    throw UnsupportedModelError("coop_joint_action: defined for two channels");
  }
  if (user1.omega[0] + user2.omega[1] >= user1.omega[1] + user2.omega[0]) {
    return {0, 1};
  }
  return {1, 0};
}

ChannelBeliefVector observe_posterior(ChannelBeliefVector beliefs, int sensed_channel,
                                      SenseObs obs) {
  beliefs.validate();
  if (sensed_channel < 0 || sensed_channel >= beliefs.omega.size()) {
    throw ValidationError("observe_posterior: sensed channel out of range");
  }
  beliefs.omega[sensed_channel] = (obs == kObsBusy) ? 0.0 : 1.0;
  return beliefs;
}

ChannelBeliefVector predict_step(const ChannelBeliefVector& beliefs,
                                 const std::vector<ChannelChain>& channels) {
  beliefs.validate();
  if (beliefs.omega.size() != static_cast<Eigen::Index>(channels.size())) {
    throw DimensionError("predict_step: one chain per channel required");
  }
  ChannelBeliefVector next = beliefs;
  for (Eigen::Index c = 0; c < next.omega.size(); ++c) {
    const ChannelChain& chain = channels[c];
    chain.validate();
    next.omega[c] = beliefs.omega[c] * (1.0 - chain.p_idle_to_busy) +
                    (1.0 - beliefs.omega[c]) * chain.p_busy_to_idle;
  }
  return next;
}

ChannelBeliefVector belief_filter_update(const ChannelBeliefVector& beliefs,
                                         int sensed_channel, SenseObs obs,
                                         const std::vector<ChannelChain>& channels) {
  return predict_step(observe_posterior(beliefs, sensed_channel, obs), channels);
}

}  // namespace osaplan
