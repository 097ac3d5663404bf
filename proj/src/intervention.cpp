#include "dynnull/intervention.hpp"

#include <cmath>

#include <fmt/format.h>

#include "dynnull/errors.hpp"

namespace dynnull {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

bool is_state_action(const Action& action) { return !std::holds_alternative<SetParam>(action); }

std::size_t targeted_species(const Action& action) {
    return std::visit(overloaded{[](const SetState& a) { return a.species; },
                                 [](const ScaleState& a) { return a.species; },
                                 [](const SetParam& a) { return a.target.row; }},
                      action);
}

void validate_action(const Action& action, std::size_t n) {
    std::visit(
        overloaded{
            [n](const SetState& a) {
                if (a.species >= n) throw ActionError("set_state species index out of range");
                if (!std::isfinite(a.value) || a.value < 0.0)
                    throw ActionError("set_state value must be >= 0");
            },
            [n](const ScaleState& a) {
                if (a.species >= n) throw ActionError("scale_state species index out of range");
                if (!std::isfinite(a.factor) || a.factor < 0.0)
                    throw ActionError("scale_state factor must be >= 0");
            },
            [n](const SetParam& a) {
                const auto& tgt = a.target;
                if (tgt.row >= n) throw ActionError("set_param species index out of range");
                if (!std::isfinite(a.value)) throw ActionError("set_param value must be finite");
                switch (tgt.kind) {
                    case ParamKind::growth_rate:
                        if (a.value < 0.0) throw ActionError("r must be >= 0");
                        break;
                    case ParamKind::capacity:
                        if (a.value <= 0.0) throw ActionError("K must be > 0");
                        break;
                    case ParamKind::interaction:
                        if (tgt.col >= n) throw ActionError("gamma column out of range");
                        if (tgt.col == tgt.row) throw ActionError("gamma diagonal is fixed at 1");
                        break;
                }
            }},
        action);
}

const SystemSpec& ScenarioRun::spec_at(double t) const {
    for (auto it = spec_timeline.rbegin(); it != spec_timeline.rend(); ++it)
        if (t >= it->start) return it->spec;
    return spec_timeline.front().spec;
}

std::size_t snap_to_grid(double t, double t0, double step, std::size_t steps) {
    if (!std::isfinite(t)) throw ScenarioError("intervention time must be finite");
    const double pos = (t - t0) / step;
    const double k = std::round(pos);
    if (std::abs(pos - k) >= 0.5 - 1e-9)
        throw ScenarioError(fmt::format("intervention time {} is half-way between grid points", t));
    if (k <= 0.0 || k >= static_cast<double>(steps))
        throw ScenarioError(
            fmt::format("intervention time {} not strictly inside the simulated span", t));
    return static_cast<std::size_t>(k);
}

void validate(const Scenario& scenario) {
    validate(scenario.spec);
    const std::size_t n = scenario.spec.size();
    if (scenario.init.v.size() != n)
        throw ArgumentError("initial state does not match species count");
    for (double v : scenario.init.v)
        if (!std::isfinite(v) || v < 0.0) throw ArgumentError("initial volumes must be >= 0");
    if (!std::isfinite(scenario.init.t)) throw ArgumentError("initial time must be finite");
    if (!(scenario.horizon > 0.0) || !std::isfinite(scenario.horizon))
        throw ArgumentError("horizon must be > 0");
    if (!(scenario.step > 0.0) || !std::isfinite(scenario.step))
        throw ArgumentError("step must be > 0");
    const std::size_t steps = step_count(scenario.horizon, scenario.step);
    if (steps < 1) throw ArgumentError("horizon shorter than one step");

    std::size_t previous = 0;
    for (const auto& iv : scenario.interventions) {
        validate_action(iv.action, n);
        const std::size_t k = snap_to_grid(iv.time, scenario.init.t, scenario.step, steps);
        if (k <= previous && previous != 0)
            throw ScenarioError(fmt::format(
                "intervention at {} is not strictly after the previous one on the grid", iv.time));
        previous = k;
    }
}

State apply_state_action(const State& state, const Action& action) {
    State out = state;
    std::visit(overloaded{[&](const SetState& a) {
                              if (a.species >= out.v.size())
                                  throw ActionError("species index out of range");
                              out.v[a.species] = a.value;
                          },
                          [&](const ScaleState& a) {
                              if (a.species >= out.v.size())
                                  throw ActionError("species index out of range");
                              out.v[a.species] *= a.factor;
                          },
                          [](const SetParam&) {
                              throw ActionError("parameter action applied to a state");
                          }},
               action);
    for (double v : out.v)
        if (!(v >= 0.0)) throw ActionError("state action produced a negative volume");
    return out;
}

SystemSpec apply_param_action(const SystemSpec& spec, const Action& action) {
    const auto* set = std::get_if<SetParam>(&action);
    if (set == nullptr) throw ActionError("state action applied to a spec");
    validate_action(action, spec.size());

    SystemSpec out = spec;
    const auto& tgt = set->target;
    switch (tgt.kind) {
        case ParamKind::growth_rate: out.growth_rate[tgt.row] = set->value; break;
        case ParamKind::capacity: out.capacity[tgt.row] = set->value; break;
        case ParamKind::interaction: out.gamma.set(tgt.row, tgt.col, set->value); break;
    }
    return out;
}

ScenarioRun run_scenario(const Scenario& scenario) {
    validate(scenario);
    const std::size_t n = scenario.spec.size();
    const double t0 = scenario.init.t;
    const double h = scenario.step;
    const std::size_t steps = step_count(scenario.horizon, h);

    Trajectory baseline = simulate(scenario.spec, scenario.init, scenario.horizon, h);

    std::vector<Intervention> applied;
    std::vector<std::size_t> at_index;
    for (const auto& iv : scenario.interventions) {
        const std::size_t k = snap_to_grid(iv.time, t0, h, steps);
        applied.push_back({t0 + static_cast<double>(k) * h, iv.action});
        at_index.push_back(k);
    }

    std::vector<SpecSegment> timeline{{t0, baseline.t_end(), scenario.spec}};
    std::vector<double> flat;
    flat.reserve((steps + 1) * n);
    flat.insert(flat.end(), scenario.init.v.begin(), scenario.init.v.end());

    Rk4Stepper stepper(n);
    State current = scenario.init;
    SystemSpec spec = scenario.spec;
    std::size_t next = 0;
    for (std::size_t k = 1; k <= steps; ++k) {
        stepper.step(spec, current.v, h);
        current.t = t0 + static_cast<double>(k) * h;
        while (next < applied.size() && at_index[next] == k) {
            const auto& action = applied[next].action;
            if (is_state_action(action)) {
                current = apply_state_action(current, action);
            } else {
                spec = apply_param_action(spec, action);
                timeline.back().end = current.t;
                timeline.push_back({current.t, baseline.t_end(), spec});
            }
            ++next;
        }
        flat.insert(flat.end(), current.v.begin(), current.v.end());
    }

    return ScenarioRun{std::move(baseline), Trajectory(t0, h, n, std::move(flat)),
                       std::move(timeline), std::move(applied)};
}

std::string describe(const Action& action, const SystemSpec& spec) {
    const auto& names = spec.species_names;
    return std::visit(
        overloaded{
            [&](const SetState& a) {
                return fmt::format("set {} to {}", names.at(a.species), a.value);
            },
            [&](const ScaleState& a) {
                return fmt::format("scale {} by {}", names.at(a.species), a.factor);
            },
            [&](const SetParam& a) {
                const auto& tgt = a.target;
                switch (tgt.kind) {
                    case ParamKind::growth_rate:
                        return fmt::format("set r:{} to {}", names.at(tgt.row), a.value);
                    case ParamKind::capacity:
                        return fmt::format("set K:{} to {}", names.at(tgt.row), a.value);
                    case ParamKind::interaction:
                        return fmt::format("set gamma:{}->{} to {}", names.at(tgt.row),
                                           names.at(tgt.col), a.value);
                }
                return std::string{};
            }},
        action);
}

}  // namespace dynnull
