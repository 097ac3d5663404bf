#include "dynnull/report.hpp"

#include <cmath>

#include <fmt/format.h>

#include "dynnull/errors.hpp"

namespace dynnull {

namespace {

using ojson = nlohmann::ordered_json;

ojson optional_number(const std::optional<double>& x) {
    if (!x || !std::isfinite(*x)) return nullptr;
    return *x;
}

ojson vector_json(std::span<const double> v) {
    ojson out = ojson::array();
    for (double x : v) out.push_back(x);
    return out;
}

}  // namespace

std::string trajectories_csv(const ScenarioRun& run) {
    const auto& names = run.original_spec().species_names;
    std::string out = "t";
    for (const auto& n : names) out += "," + n + "_baseline";
    for (const auto& n : names) out += "," + n + "_intervened";
    out += "\n";

    const Trajectory& base = run.baseline;
    const Trajectory& intv = run.intervened;
    for (std::size_t k = 0; k < base.size(); ++k) {
        fmt::format_to(std::back_inserter(out), "{:.17g}", base.time_at(k));
        for (double x : base[k]) fmt::format_to(std::back_inserter(out), ",{:.17g}", x);
        for (double x : intv[k]) fmt::format_to(std::back_inserter(out), ",{:.17g}", x);
        out += "\n";
    }
    return out;
}

ojson to_json(const EquilibriumReport& report) {
    const auto& names = report.spec.species_names;
    ojson points = ojson::array();
    for (const auto& fp : report.points) {
        ojson support = ojson::array();
        for (std::size_t i : fp.support) support.push_back(names[i]);
        ojson eig = ojson::array();
        for (const auto& ev : fp.eigenvalues) eig.push_back({{"re", ev.real()}, {"im", ev.imag()}});
        ojson p;
        p["v"] = vector_json(fp.v);
        p["support"] = std::move(support);
        p["stability"] = to_string(fp.stability);
        p["eigenvalues"] = std::move(eig);
        points.push_back(std::move(p));
    }
    ojson out;
    out["species"] = names;
    out["degenerate"] = report.degenerate;
    out["points"] = std::move(points);
    return out;
}

ojson to_json(const EffectClassification& c) {
    ojson out;
    out["verdict"] = to_string(c.verdict);
    out["null_type"] = c.null_type ? ojson(to_string(*c.null_type)) : ojson(nullptr);
    out["delta"] = optional_number(c.delta);
    out["residual"] = c.residual;
    out["shift_matched"] = c.shift_matched;
    out["match_error"] = c.shift ? optional_number(c.shift->match_error) : ojson(nullptr);
    out["baseline_settle_time"] = optional_number(c.baseline_settle_time);
    out["intervened_settle_time"] = optional_number(c.intervened_settle_time);
    if (c.equilibria)
        out["equilibria"] = {{"baseline", vector_json(c.equilibria->first)},
                             {"intervened", vector_json(c.equilibria->second)}};
    else
        out["equilibria"] = nullptr;
    return out;
}

ojson classification_report(const ScenarioRun& run, const ClassifierConfig& cfg, double faithfulness_epsilon) {
    ojson out;
    if (run.interventions.size() > 1) {
        out["verdict"] = "unclassified";
        out["reason"] = "classification handles a single intervention only";
    } else {
        out = to_json(classify_intervention(run, cfg));
    }
    if (run.interventions.size() == 1) {
        const auto& iv = run.interventions.front();
        out["intervention"] = {{"time", iv.time}, {"action", describe(iv.action, run.original_spec())}};
    } else {
        out["intervention"] = nullptr;
    }
    out["faithfulness_epsilon"] = faithfulness_epsilon;
    out["faithfulness_horizon"] = optional_number(faithfulness_horizon(run, faithfulness_epsilon));
    return out;
}

ojson equilibria_report(const ScenarioRun& run) {
    ojson out;
    out["original"] = to_json(fixed_points(run.original_spec()));
    out["final"] = to_json(fixed_points(run.final_spec()));
    return out;
}

}  // namespace dynnull
