#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include "dynnull/intervention.hpp"
#include "dynnull/ode.hpp"
#include "dynnull/system.hpp"

namespace dynnull {

enum class Verdict { dynamic_null, dynamic_non_null, inconclusive };

/// Subcases of a dynamic null: the same equilibrium reached earlier (a) or
/// later (b), a different equilibrium reachable under the original
/// dynamics (c), or no measurable shift at all.
enum class NullType { a_earlier, b_later, c_different_equilibrium, coincident };

std::string_view to_string(Verdict v);
std::string_view to_string(NullType t);

struct ClassifierConfig {
    double residual_tol = 1e-3;  // volume/time
    double delta_tol = 2 * kDefaultStep;
    double epsilon_eq = 1e-2;
    double delta_search_range = 0.0;  // 0 means horizon / 2
    int refine_iterations = 40;
    /// Largest sup-norm registration error that still counts as a pure
    /// time shift of the baseline.
    double match_tol = 1e-4;
};

/// Defaults scaled to a run: delta_tol = 2 step, search range = horizon/2.
ClassifierConfig default_config(double step, double horizon);

/// Throws ArgumentError unless every field is positive.
void validate(const ClassifierConfig& cfg);

struct ShiftEstimate {
    double delta = 0.0;  // intervened(t) ~ baseline(t - delta)
    double match_error = 0.0;
};

struct EffectClassification {
    Verdict verdict = Verdict::inconclusive;
    std::optional<NullType> null_type;
    std::optional<double> delta;
    double residual = 0.0;
    /// (baseline limit, intervened limit), when both runs settle.
    std::optional<std::pair<Volumes, Volumes>> equilibria;
    std::optional<double> baseline_settle_time;
    std::optional<double> intervened_settle_time;
    /// Set when a shift search ran; shift_matched tells whether the shift
    /// alone explains the intervened tail.
    std::optional<ShiftEstimate> shift;
    bool shift_matched = false;
};

/// Max over interior grid points t >= from_time of the sup-norm gap
/// between the central-difference derivative of `traj` and the vector
/// field of `spec`. Points within one step of any `excluded` time are
/// skipped. Throws ArgumentError with fewer than 3 samples after
/// from_time or when from_time is off the grid.
double dynamics_residual(const SystemSpec& spec, const Trajectory& traj, double from_time,
                         std::span<const double> excluded = {});

/// Registers the post-intervention part of the intervened trajectory
/// against time-shifted copies of the baseline. Coarse scan at grid
/// spacing, then golden-section refinement around the best offset; ties
/// go to the smaller |delta|. Shifts that would need the baseline before
/// its start are rejected.
ShiftEstimate estimate_shift(const ScenarioRun& run, double t_star, const ClassifierConfig& cfg);

/// Runs the residual test, then the equilibrium and shift tests, on a run
/// with at most one intervention. An empty intervention list is the
/// trivial coincident null. Throws UnsupportedScenarioError for more.
EffectClassification classify_intervention(const ScenarioRun& run, const ClassifierConfig& cfg);

/// Earliest grid time T >= t* after which intervened and baseline stay
/// within epsilon of each other for the rest of the horizon.
std::optional<double> faithfulness_horizon(const ScenarioRun& run, double epsilon);

}  // namespace dynnull
