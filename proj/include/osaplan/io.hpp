#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "osaplan/policy.hpp"
#include "osaplan/radio.hpp"
#include "osaplan/sim.hpp"
#include "osaplan/solver.hpp"
#include "osaplan/types.hpp"

namespace osaplan {

/// Everything a run needs, as read from a JSON config file. Only the
/// scenario section is mandatory; the rest defaults as documented in the
/// README.
struct RunConfig {
  RadioScenario scenario;
  SolverConfig solver;
  VectorX qos_weights;
  Scalar qos_zeta = 0.25;
  std::int64_t sim_trials = 10000;
  std::uint64_t sim_seed = 0;
  std::vector<int> compare_horizons;
  std::string library_path = "library.json";
  std::string results_path = "results.csv";
};

/// Parses and validates a config. Malformed JSON, missing sections and
/// out-of-range values all raise ValidationError.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

/// Stable fingerprint of a scenario (64-bit FNV-1a over a canonical text
/// rendering, printed as 16 hex digits). Library files carry it so a
/// policy is never replayed against a different scenario.
std::string scenario_hash(const RadioScenario& scenario);

/// One stored policy with the context it was solved and selected under.
struct LibraryEntry {
  int identity = 0;
  int horizon = 0;
  std::vector<Scalar> qos_weights;
  Scalar zeta = 0.0;
  JointPolicy policy;
  std::vector<Scalar> r_values;  ///< per-user values at b0
  Scalar joint_value = 0.0;
};

/// On-disk policy library. Trees are stored flattened with sharing intact:
/// each tree is a node list where children reference strictly earlier
/// indices (leaves have an empty child list), plus a root index.
struct PolicyLibrary {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  std::string scenario_hash;
  int selected_identity = 0;  ///< 0 when no entry satisfied the QoS spec
  std::vector<LibraryEntry> entries;

  const LibraryEntry& by_identity(int identity) const;
};

nlohmann::json library_to_json(const PolicyLibrary& library);
PolicyLibrary library_from_json(const nlohmann::json& j);
void save_library(const PolicyLibrary& library, const std::string& path);
PolicyLibrary load_library(const std::string& path);

/// Fixed-schema results table:
///   strategy,horizon,su_index,mean,stderr,network_mean,normalized,collisions
/// one row per (strategy, horizon, user), numbers printed with %.12g so
/// identical runs produce byte-identical files.
void write_throughput_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);
void save_throughput_csv(const std::vector<ComparisonRow>& rows,
                         const std::string& path);

}  // namespace osaplan
