#include "osaplan/qos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "osaplan/errors.hpp"
#include "osaplan/value.hpp"

namespace osaplan {

void QosSpec::validate(int num_agents) const {
  if (weights.size() != num_agents) {
    throw DimensionError("qos: one weight per user required");
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) throw ValidationError("qos: weights must be positive");
  }
  if (!(zeta >= 0.0)) throw ValidationError("qos: zeta must be non-negative");
  if (!(r_max >= 0.0)) throw ValidationError("qos: r_max must be non-negative");
}

QosDecision qos_satisfied(const VectorX& rewards, const QosSpec& spec) {
  spec.validate(static_cast<int>(rewards.size()));

  QosDecision d;
  d.lower = -std::numeric_limits<Scalar>::infinity();
  Scalar hi = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index i = 0; i < rewards.size(); ++i) {
    d.lower = std::max(d.lower, (rewards[i] - spec.zeta) / spec.weights[i]);
    hi = std::min(hi, (rewards[i] + spec.zeta) / spec.weights[i]);
  }
  const Scalar cap =
      (spec.r_max + rewards.size() * spec.zeta) / spec.weights.sum();
  d.upper = std::min(hi, cap);

  // t must be strictly positive; a non-positive lower end clips to 0.
  const Scalar effective_lower = std::max(d.lower, Scalar{0});
  d.satisfied = d.upper > 0.0 && effective_lower <= d.upper + kProbTol;
  if (d.satisfied) {
    d.witness_t = 0.5 * (effective_lower + d.upper);
    d.gap = 0.0;
  } else {
    d.gap = effective_lower - d.upper;
  }
  return d;
}

SelectionReport select_policy(const CandidatePool& pool, const QosSpec& spec,
                              const Belief& b0) {
  if (pool.entries().empty()) throw ValidationError("select_policy: empty pool");
  b0.validate();

  SelectionReport report;
  Scalar best_value = -std::numeric_limits<Scalar>::infinity();
  Scalar closest_gap = std::numeric_limits<Scalar>::infinity();
  for (const CandidateEntry& entry : pool.entries()) {
    VectorX rewards(entry.agent_values.size());
    for (std::size_t i = 0; i < entry.agent_values.size(); ++i) {
      rewards[i] = evaluate_at_belief(entry.agent_values[i], b0);
    }
    const QosDecision decision = qos_satisfied(rewards, spec);
    if (decision.satisfied) {
      const Scalar value = evaluate_at_belief(entry.joint_value, b0);
      if (value > best_value) {
        best_value = value;
        report.selected_identity = entry.identity;
        report.selected_value = value;
        report.selected_rewards = rewards;
        report.witness_t = decision.witness_t;
      }
    } else if (decision.gap < closest_gap) {
      closest_gap = decision.gap;
      report.closest_identity = entry.identity;
      report.closest_gap = decision.gap;
    }
  }
  return report;
}

}  // namespace osaplan
