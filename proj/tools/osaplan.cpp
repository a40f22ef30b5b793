// Command-line front end: solve, simulate, oracle and compare subcommands
// over a JSON scenario config.
//
// Exit codes: 0 success, 2 invalid config or input, 3 QoS constraint
// infeasible (the library is still written), 4 resource limit exceeded.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "osaplan/errors.hpp"
#include "osaplan/pipeline.hpp"

namespace {

using namespace osaplan;

std::string fmt(Scalar x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

void print_stats(const std::string& label, int horizon, std::int64_t trials,
                 const ThroughputStats& stats) {
  std::cout << label << ": horizon " << horizon << ", " << trials << " trials\n";
  for (Eigen::Index i = 0; i < stats.per_su_mean.size(); ++i) {
    std::cout << "  su " << i << ": " << fmt(stats.per_su_mean[i]) << " +/- "
              << fmt(stats.per_su_stderr[i]) << "\n";
  }
  std::cout << "  network " << fmt(stats.network_mean) << " +/- "
            << fmt(stats.network_stderr) << ", normalized "
            << fmt(stats.normalized_network) << ", collisions/trial "
            << fmt(stats.collision_mean) << "\n";
}

int cmd_solve(const std::string& config_path, std::optional<std::uint64_t> seed,
              std::optional<std::string> out) {
  RunConfig config = load_run_config(config_path);
  if (seed) config.solver.seed = *seed;
  if (out) config.library_path = *out;

  const SolveOutcome outcome = run_solve(config);
  save_library(outcome.library, config.library_path);

  std::cout << "scenario " << outcome.library.scenario_hash << ", horizon "
            << config.solver.horizon << ", r_max " << fmt(outcome.r_max) << "\n"
            << "pool: " << outcome.pool.entries().size()
            << " candidate policies, throughput-optimal identity "
            << outcome.pool.throughput_optimal_identity() << "\n";
  std::cout << "library written to " << config.library_path << "\n";

  if (!outcome.selection.selected_identity) {
    std::cout << "no candidate satisfies the QoS spec (zeta "
              << fmt(config.qos_zeta) << "); closest identity "
              << outcome.selection.closest_identity << " misses by "
              << fmt(outcome.selection.closest_gap) << "\n";
    return 3;
  }
  std::cout << "selected identity " << *outcome.selection.selected_identity
            << ": R = (";
  for (Eigen::Index i = 0; i < outcome.selection.selected_rewards.size(); ++i) {
    std::cout << (i > 0 ? ", " : "") << fmt(outcome.selection.selected_rewards[i]);
  }
  std::cout << "), witness t " << fmt(outcome.selection.witness_t)
            << ", joint value " << fmt(outcome.selection.selected_value) << "\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& library_path,
                 int policy_id, const std::string& baseline,
                 std::optional<std::uint64_t> seed, std::optional<std::string> out) {
  RunConfig config = load_run_config(config_path);
  if (seed) config.sim_seed = *seed;

  ComparisonRow row;
  if (!baseline.empty()) {
    row.strategy = baseline;
    row.horizon = config.solver.horizon;
    row.stats = run_simulate_baseline(config, baseline);
  } else {
    const PolicyLibrary library = load_library(library_path);
    const int identity = policy_id != 0 ? policy_id : library.selected_identity;
    if (identity == 0) {
      throw ValidationError(
          "simulate: the library has no selected policy; pass --policy-id");
    }
    row.strategy = "policy-" + std::to_string(identity);
    row.horizon = library.by_identity(identity).horizon;
    row.stats = run_simulate_library(config, library, identity);
  }

  print_stats(row.strategy, row.horizon, config.sim_trials, row.stats);
  if (out) {
    save_throughput_csv({row}, *out);
    std::cout << "results written to " << *out << "\n";
  }
  return 0;
}

int cmd_oracle(const std::string& config_path, std::optional<std::uint64_t> seed) {
  RunConfig config = load_run_config(config_path);
  if (seed) config.solver.seed = *seed;

  const OracleReport report = run_oracle(config);
  std::cout << "horizon " << config.solver.horizon << ": optimum "
            << fmt(report.optimum) << " over " << report.joint_policies
            << " joint policies, solver best " << fmt(report.solver_best)
            << ", gap " << fmt(report.gap) << "\n";
  return 0;
}

int cmd_compare(const std::string& config_path, std::optional<std::uint64_t> seed,
                std::optional<std::string> out) {
  RunConfig config = load_run_config(config_path);
  if (seed) config.sim_seed = *seed;
  if (out) config.results_path = *out;

  const std::vector<ComparisonRow> rows = run_compare(config);
  for (const ComparisonRow& row : rows) {
    std::cout << row.strategy << " T=" << row.horizon << ": network "
              << fmt(row.stats.network_mean) << " +/- "
              << fmt(row.stats.network_stderr) << " (normalized "
              << fmt(row.stats.normalized_network) << ")\n";
  }
  save_throughput_csv(rows, config.results_path);
  std::cout << "results written to " << config.results_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized opportunistic spectrum access planner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string library_path;
  std::string baseline;
  int policy_id = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;

  CLI::App* solve = app.add_subcommand(
      "solve", "Solve the configured scenario and write a policy library");
  solve->add_option("--config", config_path, "JSON config file")->required();
  solve->add_option("--seed", seed, "override the solver seed");
  solve->add_option("--out", out, "override the library output path");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Estimate throughput of a stored policy or a baseline");
  simulate->add_option("--config", config_path, "JSON config file")->required();
  simulate->add_option("--library", library_path, "policy library file");
  simulate->add_option("--policy-id", policy_id,
                       "identity of the library entry to simulate");
  simulate->add_option("--baseline", baseline, "mh, coop or partition");
  simulate->add_option("--seed", seed, "override the simulation seed");
  simulate->add_option("--out", out, "write a results CSV");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "Compare the solver against brute-force enumeration (horizon <= 3)");
  oracle->add_option("--config", config_path, "JSON config file")->required();
  oracle->add_option("--seed", seed, "override the solver seed");

  CLI::App* compare = app.add_subcommand(
      "compare", "Sweep horizons: solved policy vs. baselines, CSV output");
  compare->add_option("--config", config_path, "JSON config file")->required();
  compare->add_option("--seed", seed, "override the simulation seed");
  compare->add_option("--out", out, "override the results CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(config_path, seed, out);
    if (simulate->parsed()) {
      const bool has_library = !library_path.empty();
      const bool has_baseline = !baseline.empty();
      if (has_library == has_baseline) {
        std::cerr << "simulate needs exactly one of --library or --baseline\n";
        return 2;
      }
      return cmd_simulate(config_path, library_path, policy_id, baseline, seed, out);
    }
    if (oracle->parsed()) return cmd_oracle(config_path, seed);
    return cmd_compare(config_path, seed, out);
  } catch (const osaplan::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {  // validation/dimension errors
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const osaplan::StructureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const osaplan::UnsupportedModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
