#include "osaplan/io.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <unordered_map>

#include "osaplan/errors.hpp"

namespace osaplan {

namespace {

using nlohmann::json;

std::string fmt(Scalar x, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, x);
  return buf;
}

Belief initial_belief_from_json(const json& j, int num_channels,
                                const std::vector<ChannelChain>& channels) {
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "point-mass") {
    const auto bits = j.at("state").get<std::vector<int>>();
    return point_mass_belief(num_channels, bits);
  }
  if (mode == "steady-state") {
    return steady_state_belief(channels);
  }
  throw ValidationError("config: initial_belief mode must be point-mass or steady-state");
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig config;
  try {
    const json& sc = j.at("scenario");
    for (const json& ch : sc.at("channels")) {
      ChannelChain chain;
      chain.p_busy_to_idle = ch.at("p_busy_to_idle").get<Scalar>();
      chain.p_idle_to_busy = ch.at("p_idle_to_busy").get<Scalar>();
      config.scenario.channels.push_back(chain);
    }
    config.scenario.num_sus = sc.at("num_sus").get<int>();
    config.scenario.initial_belief = initial_belief_from_json(
        sc.at("initial_belief"), static_cast<int>(config.scenario.channels.size()),
        config.scenario.channels);

    if (j.contains("solver")) {
      const json& s = j.at("solver");
      config.solver.horizon = s.value("horizon", config.solver.horizon);
      config.solver.max_trees = s.value("max_trees", config.solver.max_trees);
      config.solver.trials = s.value("trials", config.solver.trials);
      config.solver.seed = s.value("seed", config.solver.seed);
      config.solver.belief_jitter = s.value("belief_jitter", config.solver.belief_jitter);
      config.solver.max_backup_trees =
          s.value("max_backup_trees", config.solver.max_backup_trees);
    }

    if (j.contains("qos")) {
      const json& q = j.at("qos");
      if (q.contains("weights")) {
        const auto w = q.at("weights").get<std::vector<Scalar>>();
        config.qos_weights =
            Eigen::Map<const VectorX>(w.data(), static_cast<Eigen::Index>(w.size()));
      }
      config.qos_zeta = q.value("zeta", config.qos_zeta);
    }
    if (config.qos_weights.size() == 0) {
      config.qos_weights = VectorX::Ones(config.scenario.num_sus);
    }

    if (j.contains("sim")) {
      config.sim_trials = j.at("sim").value("trials", config.sim_trials);
      config.sim_seed = j.at("sim").value("seed", config.sim_seed);
    }
    if (j.contains("compare")) {
      config.compare_horizons =
          j.at("compare").value("horizons", config.compare_horizons);
    }
    if (j.contains("output")) {
      config.library_path = j.at("output").value("library", config.library_path);
      config.results_path = j.at("output").value("results", config.results_path);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }

  config.scenario.validate();
  config.solver.validate();
  if (config.qos_weights.size() != config.scenario.num_sus) {
    throw ValidationError("config: one QoS weight per user required");
  }
  for (Eigen::Index i = 0; i < config.qos_weights.size(); ++i) {
    if (!(config.qos_weights[i] > 0.0)) {
      throw ValidationError("config: QoS weights must be positive");
    }
  }
  if (!(config.qos_zeta >= 0.0)) throw ValidationError("config: zeta must be >= 0");
  if (config.sim_trials < 1) throw ValidationError("config: sim trials must be >= 1");
  for (int horizon : config.compare_horizons) {
    if (horizon < 1) throw ValidationError("config: compare horizons must be >= 1");
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("config: " + path + " is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

std::string scenario_hash(const RadioScenario& scenario) {
  scenario.validate();
  std::string canon = "C=" + std::to_string(scenario.channels.size()) + ";";
  for (const ChannelChain& chain : scenario.channels) {
    canon += fmt(chain.p_busy_to_idle, "%.17g");
    canon += ",";
    canon += fmt(chain.p_idle_to_busy, "%.17g");
    canon += ";";
  }
  canon += "M=" + std::to_string(scenario.num_sus) + ";b0=";
  for (Eigen::Index s = 0; s < scenario.initial_belief.probs.size(); ++s) {
    canon += fmt(scenario.initial_belief.probs[s], "%.17g");
    canon += ",";
  }

  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const LibraryEntry& PolicyLibrary::by_identity(int identity) const {
  for (const LibraryEntry& entry : entries) {
    if (entry.identity == identity) return entry;
  }
  std::string known;
  for (const LibraryEntry& entry : entries) {
    if (!known.empty()) known += ", ";
    known += std::to_string(entry.identity);
  }
  throw ValidationError("library: unknown policy identity " + std::to_string(identity) +
                        " (available: " + (known.empty() ? "none" : known) + ")");
}

namespace {

json tree_to_json(const PolicyTreePtr& root) {
  json nodes = json::array();
  std::unordered_map<const PolicyTree*, int> ids;

  // Children-first emission so every child reference points at an earlier
  // node index; shared subtrees are emitted once.
  const std::function<int(const PolicyTreePtr&)> emit =
      [&](const PolicyTreePtr& node) -> int {
    auto hit = ids.find(node.get());
    if (hit != ids.end()) return hit->second;
    json children = json::array();
    for (const PolicyTreePtr& child : node->children) {
      if (!child) throw StructureError("library: null child while serializing");
      children.push_back(emit(child));
    }
    const int id = static_cast<int>(nodes.size());
    nodes.push_back({{"action", node->action}, {"children", std::move(children)}});
    ids.emplace(node.get(), id);
    return id;
  };
  const int root_id = emit(root);
  return {{"root", root_id}, {"nodes", std::move(nodes)}};
}

PolicyTreePtr tree_from_json(const json& j) {
  const auto& nodes = j.at("nodes");
  if (!nodes.is_array() || nodes.empty()) {
    throw ValidationError("library: tree needs a non-empty node list");
  }
  std::vector<PolicyTreePtr> built;
  built.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const json& n = nodes[i];
    const int action = n.at("action").get<int>();
    const auto child_ids = n.at("children").get<std::vector<int>>();
    if (child_ids.empty()) {
      built.push_back(make_leaf(action));
      continue;
    }
    std::vector<PolicyTreePtr> children;
    for (int id : child_ids) {
      if (id < 0 || id >= static_cast<int>(i)) {
        throw ValidationError(
            "library: tree child must reference an earlier node index");
      }
      children.push_back(built[id]);
    }
    built.push_back(make_node(action, std::move(children)));
  }
  const int root = j.at("root").get<int>();
  if (root < 0 || root >= static_cast<int>(built.size())) {
    throw ValidationError("library: tree root index out of range");
  }
  return built[root];
}

}  // namespace

json library_to_json(const PolicyLibrary& library) {
  json entries = json::array();
  for (const LibraryEntry& entry : library.entries) {
    json trees = json::array();
    for (const PolicyTreePtr& tree : entry.policy.trees) trees.push_back(tree_to_json(tree));
    entries.push_back({{"identity", entry.identity},
                       {"horizon", entry.horizon},
                       {"qos_weights", entry.qos_weights},
                       {"zeta", entry.zeta},
                       {"r_values", entry.r_values},
                       {"joint_value", entry.joint_value},
                       {"trees", std::move(trees)}});
  }
  return {{"format_version", library.format_version},
          {"scenario_hash", library.scenario_hash},
          {"selected_identity", library.selected_identity},
          {"entries", std::move(entries)}};
}

PolicyLibrary library_from_json(const json& j) {
  PolicyLibrary library;
  try {
    library.format_version = j.at("format_version").get<int>();
    if (library.format_version != PolicyLibrary::kFormatVersion) {
      throw ValidationError("library: unsupported format_version " +
                            std::to_string(library.format_version));
    }
    library.scenario_hash = j.at("scenario_hash").get<std::string>();
    library.selected_identity = j.value("selected_identity", 0);
    for (const json& e : j.at("entries")) {
      LibraryEntry entry;
      entry.identity = e.at("identity").get<int>();
      entry.horizon = e.at("horizon").get<int>();
      entry.qos_weights = e.at("qos_weights").get<std::vector<Scalar>>();
      entry.zeta = e.at("zeta").get<Scalar>();
      entry.r_values = e.at("r_values").get<std::vector<Scalar>>();
      entry.joint_value = e.at("joint_value").get<Scalar>();
      for (const json& tree : e.at("trees")) {
        entry.policy.trees.push_back(tree_from_json(tree));
      }
      if (entry.policy.depth() != entry.horizon) {
        throw ValidationError("library: entry tree depth disagrees with its horizon");
      }
      for (const LibraryEntry& prev : library.entries) {
        if (prev.identity == entry.identity) {
          throw ValidationError("library: duplicate identity " +
                                std::to_string(entry.identity));
        }
      }
      library.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("library: ") + e.what());
  }
  return library;
}

void save_library(const PolicyLibrary& library, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("library: cannot write " + path);
  out << library_to_json(library).dump(2) << "\n";
}

PolicyLibrary load_library(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("library: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("library: " + path + " is not valid JSON: " + e.what());
  }
  return library_from_json(j);
}

void write_throughput_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "strategy,horizon,su_index,mean,stderr,network_mean,normalized,collisions\n";
  for (const ComparisonRow& row : rows) {
    for (Eigen::Index i = 0; i < row.stats.per_su_mean.size(); ++i) {
      out << row.strategy << ',' << row.horizon << ',' << i << ','
          << fmt(row.stats.per_su_mean[i]) << ',' << fmt(row.stats.per_su_stderr[i])
          << ',' << fmt(row.stats.network_mean) << ','
          << fmt(row.stats.normalized_network) << ','
          << fmt(row.stats.collision_mean) << '\n';
    }
  }
}

void save_throughput_csv(const std::vector<ComparisonRow>& rows,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("results: cannot write " + path);
  write_throughput_csv(out, rows);
}

}  // namespace osaplan
