// Command-line front end: run, batch, equilibria, graph, validate.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dynnull/commands.hpp"

int main(int argc, char** argv) {
    using namespace dynnull;

    CLI::App app{"Intervention laboratory for Lotka-Volterra systems: simulate, intervene, classify"};
    app.require_subcommand(1);

    RunOptions opts;
    std::optional<double> step;
    std::optional<double> horizon;
    std::optional<double> epsilon;
    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--step", step, "Integration step h")->check(CLI::PositiveNumber);
        cmd->add_option("--horizon", horizon, "Simulated duration")->check(CLI::PositiveNumber);
        cmd->add_option("--epsilon", epsilon, "Equilibrium tolerance epsilon_eq")->check(CLI::PositiveNumber);
    };

    std::string scenario;
    std::string out_dir;
    std::string format = "dot";
    int jobs = 1;

    auto* run = app.add_subcommand("run", "Simulate, classify and write all artifacts");
    run->add_option("scenario", scenario, "Scenario JSON file")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    add_overrides(run);

    auto* batch = app.add_subcommand("batch", "Run every scenario in a directory");
    batch->add_option("dir", scenario, "Directory of scenario files")->required();
    batch->add_option("--out", out_dir, "Output root (default: the scenario directory)");
    batch->add_option("--jobs", jobs, "Concurrent scenarios")->check(CLI::PositiveNumber);
    add_overrides(batch);

    auto* eq = app.add_subcommand("equilibria", "Fixed points and stability only");
    eq->add_option("scenario", scenario, "Scenario JSON file")->required();
    eq->add_option("--out", out_dir, "Output directory (default: stdout)");
    add_overrides(eq);

    auto* graph = app.add_subcommand("graph", "Graph export only");
    graph->add_option("scenario", scenario, "Scenario JSON file")->required();
    graph->add_option("--out", out_dir, "Output directory")->required();
    graph->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
    add_overrides(graph);

    auto* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
    validate->add_option("scenario", scenario, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    opts.step = step;
    opts.horizon = horizon;
    opts.epsilon_eq = epsilon;

    if (*run) return cmd_run(scenario, out_dir, opts, std::cerr);
    if (*batch) return cmd_batch(scenario, out_dir.empty() ? scenario : out_dir, jobs, opts, std::cout, std::cerr);
    if (*eq) {
        std::optional<std::filesystem::path> dir;
        if (!out_dir.empty()) dir = out_dir;
        return cmd_equilibria(scenario, dir, opts, std::cout, std::cerr);
    }
    if (*graph)
        return cmd_graph(scenario, out_dir, format == "json" ? GraphFormat::json : GraphFormat::dot, opts, std::cerr);
    return cmd_validate(scenario, std::cout, std::cerr);
}
