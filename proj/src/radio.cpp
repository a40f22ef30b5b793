#include "osaplan/radio.hpp"

#include <algorithm>
#include <cmath>

#include "osaplan/errors.hpp"

namespace osaplan {

void ChannelChain::validate() const {
  if (p_busy_to_idle < 0.0 || p_busy_to_idle > 1.0 || std::isnan(p_busy_to_idle)) {
    throw ValidationError("channel: p_busy_to_idle outside [0,1]");
  }
  if (p_idle_to_busy < 0.0 || p_idle_to_busy > 1.0 || std::isnan(p_idle_to_busy)) {
    throw ValidationError("channel: p_idle_to_busy outside [0,1]");
  }
}

std::pair<Scalar, Scalar> steady_state(const ChannelChain& chain) {
  chain.validate();
  const Scalar total = chain.p_busy_to_idle + chain.p_idle_to_busy;
  if (total <= 0.0) {
    throw ValidationError("steady_state: chain never switches state");
  }
  const Scalar pi_idle = chain.p_busy_to_idle / total;
  return {1.0 - pi_idle, pi_idle};
}

int num_channel_states(int num_channels) {
  if (num_channels < 1 || num_channels > 20) {
    throw ValidationError("num_channel_states: channel count out of range");
  }
  return 1 << num_channels;
}

int channel_state_index(const std::vector<int>& bits) {
  int idx = 0;
  for (int bit : bits) {
    if (bit != 0 && bit != 1) throw ValidationError("channel bits must be 0 or 1");
    idx = (idx << 1) | bit;
  }
  return idx;
}

bool channel_idle(int state, int channel, int num_channels) {
  return ((state >> (num_channels - 1 - channel)) & 1) != 0;
}

int idle_count(int state, int num_channels) {
  int n = 0;
  for (int c = 0; c < num_channels; ++c) n += channel_idle(state, c, num_channels);
  return n;
}

void RadioScenario::validate() const {
  if (channels.empty()) throw ValidationError("scenario: need at least one channel");
  for (const ChannelChain& chain : channels) chain.validate();
  if (num_sus < 1) throw ValidationError("scenario: need at least one secondary user");
  initial_belief.validate();
  if (initial_belief.probs.size() !=
      num_channel_states(static_cast<int>(channels.size()))) {
    throw DimensionError("scenario: initial belief length must be 2^num_channels");
  }
}

MatrixX joint_transition_matrix(const std::vector<ChannelChain>& channels) {
  const int C = static_cast<int>(channels.size());
  const int n = num_channel_states(C);
  MatrixX t = MatrixX::Ones(n, n);
  for (int s = 0; s < n; ++s) {
    for (int s2 = 0; s2 < n; ++s2) {
      for (int c = 0; c < C; ++c) {
        const bool idle_now = channel_idle(s, c, C);
        const bool idle_next = channel_idle(s2, c, C);
        const ChannelChain& chain = channels[c];
        Scalar p;
        if (idle_now) {
          p = idle_next ? 1.0 - chain.p_idle_to_busy : chain.p_idle_to_busy;
        } else {
          p = idle_next ? chain.p_busy_to_idle : 1.0 - chain.p_busy_to_idle;
        }
        t(s, s2) *= p;
      }
    }
  }
  return t;
}

Belief steady_state_belief(const std::vector<ChannelChain>& channels) {
  const int C = static_cast<int>(channels.size());
  const int n = num_channel_states(C);
  Belief b;
  b.probs = VectorX::Ones(n);
  for (int s = 0; s < n; ++s) {
    for (int c = 0; c < C; ++c) {
      const auto [pi_busy, pi_idle] = steady_state(channels[c]);
      b.probs[s] *= channel_idle(s, c, C) ? pi_idle : pi_busy;
    }
  }
  return b;
}

Belief point_mass_belief(int num_channels, const std::vector<int>& bits) {
  if (static_cast<int>(bits.size()) != num_channels) {
    throw DimensionError("point_mass_belief: one bit per channel required");
  }
  return Belief::point_mass(num_channel_states(num_channels),
                            channel_state_index(bits));
}

VectorX channel_marginals(const Belief& belief, int num_channels) {
  const int n = num_channel_states(num_channels);
  if (belief.probs.size() != n) {
    throw DimensionError("channel_marginals: belief length must be 2^num_channels");
  }
  VectorX omega = VectorX::Zero(num_channels);
  for (int s = 0; s < n; ++s) {
    for (int c = 0; c < num_channels; ++c) {
      if (channel_idle(s, c, num_channels)) omega[c] += belief.probs[s];
    }
  }
  return omega;
}

SlotOutcome slot_outcome(int state, const std::vector<int>& sensed_channels,
                         int num_channels) {
  const int num_sus = static_cast<int>(sensed_channels.size());
  std::vector<int> senders(num_channels, 0);
  for (int ch : sensed_channels) {
    if (ch < 0 || ch >= num_channels) {
      throw ValidationError("slot_outcome: sensed channel out of range");
    }
    ++senders[ch];
  }

  SlotOutcome out;
  out.obs.resize(num_sus);
  out.rewards.assign(num_sus, 0.0);
  for (int i = 0; i < num_sus; ++i) {
    const int ch = sensed_channels[i];
    if (!channel_idle(state, ch, num_channels)) {
      out.obs[i] = kObsBusy;  // busy channel: stay silent, no reward
    } else if (senders[ch] == 1) {
      out.obs[i] = kObsFreeAck;
      out.rewards[i] = 1.0;
    } else {
      out.obs[i] = kObsFreeCollision;  // contested idle channel: packets lost
    }
    out.joint_reward += out.rewards[i];
  }
  for (int c = 0; c < num_channels; ++c) {
    if (senders[c] >= 2 && channel_idle(state, c, num_channels)) ++out.collisions;
  }
  return out;
}

DecPomdpModel build_scenario(const RadioScenario& scenario) {
  scenario.validate();
  const int C = static_cast<int>(scenario.channels.size());
  const int n_states = num_channel_states(C);
  const int M = scenario.num_sus;

  DecPomdpModel model;
  model.num_agents = M;
  model.num_states = n_states;
  model.num_actions.assign(M, C);
  model.num_observations.assign(M, kNumSenseObs);
  model.state_transition = joint_transition_matrix(scenario.channels);

  const int n_ja = model.num_joint_actions();
  model.joint_reward = MatrixX::Zero(n_states, n_ja);
  model.agent_rewards.assign(M, MatrixX::Zero(n_states, n_ja));
  model.kernel.resize(static_cast<std::size_t>(n_states) * n_ja);

  const MatrixX& t = *model.state_transition;
  for (int s = 0; s < n_states; ++s) {
    for (int ja = 0; ja < n_ja; ++ja) {
      const std::vector<int> channels = split_index(ja, model.num_actions);
      const SlotOutcome out = slot_outcome(s, channels, C);
      model.joint_reward(s, ja) = out.joint_reward;
      for (int i = 0; i < M; ++i) model.agent_rewards[i](s, ja) = out.rewards[i];

      // Observations are fixed by (state, joint channel choice); only the
      // next state is random, via the action-independent product chain.
      const int jo = joint_index(out.obs, model.num_observations);
      std::vector<TransitionOutcome>& row =
          model.kernel[static_cast<std::size_t>(s) * n_ja + ja];
      for (int s2 = 0; s2 < n_states; ++s2) {
        if (t(s, s2) > 0.0) row.push_back({s2, jo, t(s, s2)});
      }
    }
  }
  model.validate();
  return model;
}

Scalar genie_rmax(const RadioScenario& scenario, int horizon) {
  scenario.validate();
  if (horizon < 1) throw ValidationError("genie_rmax: horizon must be positive");
  const int C = static_cast<int>(scenario.channels.size());
  const MatrixX t = joint_transition_matrix(scenario.channels);

  VectorX b = scenario.initial_belief.probs;
  Scalar total = 0.0;
  for (int slot = 0; slot < horizon; ++slot) {
    for (int s = 0; s < b.size(); ++s) {
      total += b[s] * std::min(scenario.num_sus, idle_count(s, C));
    }
    b = t.transpose() * b;
  }
  return total;
}

}  // namespace osaplan
