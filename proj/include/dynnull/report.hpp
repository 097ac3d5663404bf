#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "dynnull/classifier.hpp"
#include "dynnull/equilibrium.hpp"
#include "dynnull/intervention.hpp"

namespace dynnull {

/// Header "t,<name>_baseline...,<name>_intervened..." then one row per
/// grid point, 17 significant digits.
std::string trajectories_csv(const ScenarioRun& run);

nlohmann::ordered_json to_json(const EquilibriumReport& report);

nlohmann::ordered_json to_json(const EffectClassification& c);

/// Full classification.json body for a run, including the faithfulness
/// horizon at `faithfulness_epsilon`. Runs with several interventions are
/// reported as "unclassified" instead of failing.
nlohmann::ordered_json classification_report(const ScenarioRun& run, const ClassifierConfig& cfg,
                                             double faithfulness_epsilon);

/// equilibria.json body: the original spec and the spec in force at the
/// end of the run.
nlohmann::ordered_json equilibria_report(const ScenarioRun& run);

}  // namespace dynnull
