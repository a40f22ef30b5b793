#pragma once

#include <optional>
#include <string>

#include "osaplan/io.hpp"
#include "osaplan/oracle.hpp"
#include "osaplan/qos.hpp"
#include "osaplan/sim.hpp"
#include "osaplan/solver.hpp"

namespace osaplan {

/// End-to-end solve: run the solver, compute the clairvoyant bound, apply
/// the QoS selection, and package everything as a policy library. The
/// library is produced, and worth persisting, even when no candidate
/// satisfies the QoS spec.
struct SolveOutcome {
  CandidatePool pool;
  Scalar r_max = 0.0;
  SelectionReport selection;
  PolicyLibrary library;
};

SolveOutcome run_solve(const RunConfig& config);

/// Resolves a baseline name ("mh", "coop", "partition") for the scenario;
/// "partition" assigns user i to channel i modulo the channel count.
/// Unknown names raise ValidationError.
Strategy baseline_strategy(const std::string& name, const RadioScenario& scenario);

/// Simulates a stored policy against the config's scenario. Refuses (with
/// ValidationError) when the library's scenario hash does not match, the
/// identity is unknown, or the entry's horizon disagrees with the request.
ThroughputStats run_simulate_library(const RunConfig& config,
                                     const PolicyLibrary& library, int identity);

/// Simulates a named baseline under the config's horizon/trials/seed.
ThroughputStats run_simulate_baseline(const RunConfig& config,
                                      const std::string& baseline);

/// Brute-force check of the solver on the config's scenario and horizon.
OracleReport run_oracle(const RunConfig& config);

/// Solve + simulate sweep across the config's compare horizons.
std::vector<ComparisonRow> run_compare(const RunConfig& config);

}  // namespace osaplan
