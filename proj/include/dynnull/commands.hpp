#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace dynnull {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIntegration = 2 };

/// Command-line overrides applied on top of a scenario file.
struct RunOptions {
    std::optional<double> step;
    std::optional<double> horizon;
    std::optional<double> epsilon_eq;
    /// Gap threshold for the faithfulness horizon and "affected" graph nodes.
    double effect_epsilon = 1e-3;
};

/// Writes trajectories.csv, classification.json, equilibria.json,
/// time_dag.dot and dynamic_graph.dot into `out_dir`.
int cmd_run(const std::filesystem::path& scenario, const std::filesystem::path& out_dir,
            const RunOptions& opts, std::ostream& err);

/// Runs every *.json in `dir` (sorted by name) with up to `jobs` workers.
/// Outputs go to <out_root>/<stem>/; a summary table goes to `out` in
/// file order. Returns the worst per-scenario exit code.
int cmd_batch(const std::filesystem::path& dir, const std::filesystem::path& out_root, int jobs,
              const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Equilibrium report only; to out_dir/equilibria.json or `out`.
int cmd_equilibria(const std::filesystem::path& scenario, const std::optional<std::filesystem::path>& out_dir,
                   const RunOptions& opts, std::ostream& out, std::ostream& err);

enum class GraphFormat { dot, json };

/// Both graphs only, as time_dag.<ext> and dynamic_graph.<ext>.
int cmd_graph(const std::filesystem::path& scenario, const std::filesystem::path& out_dir, GraphFormat format,
              const RunOptions& opts, std::ostream& err);

/// Parse and validate only. Prints the canonical form on success.
int cmd_validate(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err);

}  // namespace dynnull
