#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynnull/classifier.hpp"
#include "dynnull/intervention.hpp"

namespace dynnull {

inline constexpr int kSchemaVersion = 1;

/// Per-field overrides from a scenario file's "classifier" block.
struct ClassifierOverrides {
    std::optional<double> residual_tol;
    std::optional<double> delta_tol;
    std::optional<double> epsilon_eq;
    std::optional<double> delta_search_range;
    std::optional<int> refine_iterations;
    std::optional<double> match_tol;

    bool operator==(const ClassifierOverrides&) const = default;
};

/// Everything a scenario file declares.
///
/// File layout (schema_version 1):
///
///   {
///     "schema_version": 1,
///     "system": {
///       "species": [{"name": "target", "r": 0.16, "K": 0.85}, ...],
///       "gamma":   [{"from": "target", "to": "proxy", "value": 0.3}, ...]
///     },
///     "init": {"target": 0.25, "proxy": 0.05},
///     "horizon": 200, "step": 0.01,
///     "interventions": [
///       {"time": 20, "action": "set_param", "target": "K:proxy", "value": 0.2}
///     ],
///     "classifier": {"epsilon_eq": 0.01},
///     "measure_times": [0, 10, 20, 30]
///   }
///
/// A gamma entry {from: a, to: b} is the weight of b inside a's equation.
/// Parameter targets are "r:<name>", "K:<name>" or "gamma:<from>-><to>";
/// state actions ("set_state", "scale_state") name a species.
struct ScenarioDocument {
    Scenario scenario;
    ClassifierOverrides classifier;
    std::optional<std::vector<double>> measure_times;

    bool operator==(const ScenarioDocument&) const = default;
};

/// Throws ParseError (with line/column) on malformed JSON and
/// ValidationError naming the field for anything semantically wrong,
/// including unknown keys and non-finite numbers.
ScenarioDocument parse_scenario(std::string_view text);

ScenarioDocument load_scenario(const std::filesystem::path& path);

/// Canonical JSON text; parse_scenario(emit_scenario(d)) == d.
std::string emit_scenario(const ScenarioDocument& doc);

/// Defaults for the scenario's step and horizon, then file overrides.
ClassifierConfig resolve_classifier(const ScenarioDocument& doc);

/// Measurement times from the file, or eleven evenly spaced grid times.
std::vector<double> resolve_measure_times(const ScenarioDocument& doc);

std::string format_param_target(const ParamTarget& target, const SystemSpec& spec);

}  // namespace dynnull
