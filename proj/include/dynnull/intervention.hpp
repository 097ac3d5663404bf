#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "dynnull/ode.hpp"
#include "dynnull/system.hpp"

namespace dynnull {

/// Replace species volume with `value`.
struct SetState {
    std::size_t species = 0;
    double value = 0.0;
    bool operator==(const SetState&) const = default;
};

/// Multiply species volume by `factor` (a 60% decrease is factor 0.4).
struct ScaleState {
    std::size_t species = 0;
    double factor = 1.0;
    bool operator==(const ScaleState&) const = default;
};

enum class ParamKind { growth_rate, capacity, interaction };

/// Which coefficient a parameter action addresses. `row` is the species
/// whose equation changes; `col` is only meaningful for interactions.
struct ParamTarget {
    ParamKind kind = ParamKind::growth_rate;
    std::size_t row = 0;
    std::size_t col = 0;

    static ParamTarget growth_rate(std::size_t i) { return {ParamKind::growth_rate, i, 0}; }
    static ParamTarget capacity(std::size_t i) { return {ParamKind::capacity, i, 0}; }
    static ParamTarget interaction(std::size_t i, std::size_t j) {
        return {ParamKind::interaction, i, j};
    }

    bool operator==(const ParamTarget&) const = default;
};

struct SetParam {
    ParamTarget target;
    double value = 0.0;
    bool operator==(const SetParam&) const = default;
};

using Action = std::variant<SetState, ScaleState, SetParam>;

struct Intervention {
    double time = 0.0;
    Action action;
    bool operator==(const Intervention&) const = default;
};

bool is_state_action(const Action& action);

/// Species whose state or equation the action touches.
std::size_t targeted_species(const Action& action);

/// Throws ActionError if the action is malformed for an n-species system.
void validate_action(const Action& action, std::size_t n);

struct Scenario {
    SystemSpec spec;
    State init;
    double horizon = 0.0;
    double step = kDefaultStep;
    std::vector<Intervention> interventions;

    bool operator==(const Scenario&) const = default;
};

/// Half-open interval [start, end) of the spec in force; the last segment
/// is closed at the horizon.
struct SpecSegment {
    double start = 0.0;
    double end = 0.0;
    SystemSpec spec;
};

struct ScenarioRun {
    Trajectory baseline;
    Trajectory intervened;
    std::vector<SpecSegment> spec_timeline;
    /// Interventions as applied, times snapped to the grid.
    std::vector<Intervention> interventions;

    const SystemSpec& original_spec() const { return spec_timeline.front().spec; }
    const SystemSpec& final_spec() const { return spec_timeline.back().spec; }
    const SystemSpec& spec_at(double t) const;
};

/// Grid index for intervention time `t`, snapped to the nearest grid
/// point. Exact half-step ties are ambiguous and rejected, as are points
/// on or outside the ends of the grid. Throws ScenarioError.
std::size_t snap_to_grid(double t, double t0, double step, std::size_t steps);

/// Checks spec, init, horizon/step and the intervention list. Throws
/// ArgumentError, ActionError or ScenarioError.
void validate(const Scenario& scenario);

/// Baseline plus piecewise-re-simulated intervened trajectory on the same
/// grid. The sample at each intervention time holds the post-action state.
ScenarioRun run_scenario(const Scenario& scenario);

State apply_state_action(const State& state, const Action& action);
SystemSpec apply_param_action(const SystemSpec& spec, const Action& action);

std::string describe(const Action& action, const SystemSpec& spec);

}  // namespace dynnull
