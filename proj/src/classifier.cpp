#include "dynnull/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynnull/equilibrium.hpp"
#include "dynnull/errors.hpp"

namespace dynnull {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t grid_index_or_throw(const Trajectory& traj, double t, const char* what) {
    auto k = traj.grid_index(t, 1e-6 * traj.step());
    if (!k) throw ArgumentError(std::string(what) + " is not on the trajectory grid");
    return *k;
}

/// Registration error for an integer grid offset; gives up as soon as it
/// reaches `bound`.
double grid_match_error(const Trajectory& intervened, const Trajectory& baseline,
                        std::size_t first, std::ptrdiff_t offset, double bound) {
    const auto last = static_cast<std::ptrdiff_t>(intervened.size()) - 1 -
                      static_cast<std::ptrdiff_t>(std::abs(offset));
    const auto begin = static_cast<std::ptrdiff_t>(first);
    if (last < begin || begin - offset < 0) return kInf;
    double err = 0.0;
    for (std::ptrdiff_t i = begin; i <= last; ++i) {
        err = std::max(err, sup_distance(intervened[static_cast<std::size_t>(i)],
                                         baseline[static_cast<std::size_t>(i - offset)]));
        if (err >= bound) return kInf;
    }
    return err;
}

double continuous_match_error(const Trajectory& intervened, const Trajectory& baseline,
                              std::size_t first, double delta) {
    const double h = intervened.step();
    const double slack = 1e-9 * h;
    const double window_end = intervened.t_end() - std::abs(delta) + slack;
    if (intervened.time_at(first) - delta < baseline.t0() - slack) return kInf;
    if (intervened.time_at(first) > window_end) return kInf;

    double err = 0.0;
    for (std::size_t i = first; i < intervened.size() && intervened.time_at(i) <= window_end; ++i) {
        const double tau = std::clamp(intervened.time_at(i) - delta, baseline.t0(), baseline.t_end());
        err = std::max(err, sup_distance(intervened[i], state_at(baseline, tau)));
    }
    return err;
}

bool better(double err, double delta, double best_err, double best_delta) {
    if (err != best_err) return err < best_err;
    return std::abs(delta) < std::abs(best_delta);
}

NullType label_shift(double delta, double delta_tol) {
    if (delta < -delta_tol) return NullType::a_earlier;
    if (delta > delta_tol) return NullType::b_later;
    return NullType::coincident;
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::dynamic_null: return "dynamic_null";
        case Verdict::dynamic_non_null: return "dynamic_non_null";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

std::string_view to_string(NullType t) {
    switch (t) {
        case NullType::a_earlier: return "a_earlier";
        case NullType::b_later: return "b_later";
        case NullType::c_different_equilibrium: return "c_different_equilibrium";
        case NullType::coincident: return "coincident";
    }
    return "unknown";
}

ClassifierConfig default_config(double step, double horizon) {
    ClassifierConfig cfg;
    cfg.delta_tol = 2.0 * step;
    cfg.delta_search_range = horizon / 2.0;
    return cfg;
}

void validate(const ClassifierConfig& cfg) {
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(cfg.residual_tol) || !positive(cfg.delta_tol) || !positive(cfg.epsilon_eq) ||
        !positive(cfg.delta_search_range) || !positive(cfg.match_tol) || cfg.refine_iterations <= 0)
        throw ArgumentError("classifier settings must all be positive");
}

double dynamics_residual(const SystemSpec& spec, const Trajectory& traj, double from_time,
                         std::span<const double> excluded) {
    const std::size_t from = grid_index_or_throw(traj, from_time, "residual start time");
    if (traj.size() - 1 - from < 3) throw ArgumentError("fewer than 3 samples after start time");
    if (traj.species() != spec.size()) throw ArgumentError("trajectory does not match system");

    const double h = traj.step();
    const std::size_t n = spec.size();
    std::vector<double> field(n);
    double worst = 0.0;
    for (std::size_t k = std::max<std::size_t>(from, 1); k + 1 < traj.size(); ++k) {
        const double t = traj.time_at(k);
        const bool skip = std::any_of(excluded.begin(), excluded.end(),
                                      [&](double te) { return std::abs(t - te) <= h * (1 + 1e-6); });
        if (skip) continue;
        vector_field_into(spec, traj[k], field);
        auto prev = traj[k - 1];
        auto next = traj[k + 1];
        for (std::size_t i = 0; i < n; ++i) {
            const double derivative = (next[i] - prev[i]) / (2.0 * h);
            worst = std::max(worst, std::abs(derivative - field[i]));
        }
    }
    return worst;
}

ShiftEstimate estimate_shift(const ScenarioRun& run, double t_star, const ClassifierConfig& cfg) {
    const auto has = std::any_of(run.interventions.begin(), run.interventions.end(),
                                 [&](const Intervention& iv) {
                                     return std::abs(iv.time - t_star) <= 1e-6 * run.intervened.step();
                                 });
    if (!has) throw ArgumentError("no intervention at the requested time");

    const Trajectory& intervened = run.intervened;
    const Trajectory& baseline = run.baseline;
    const double h = intervened.step();
    const std::size_t first = grid_index_or_throw(intervened, t_star, "intervention time");
    const double range =
        cfg.delta_search_range > 0.0 ? cfg.delta_search_range : (intervened.t_end() - intervened.t0()) / 2.0;
    const auto max_offset = static_cast<std::ptrdiff_t>(std::floor(range / h + 1e-9));

    double best_err = kInf;
    std::ptrdiff_t best_offset = 0;
    for (std::ptrdiff_t mag = 0; mag <= max_offset; ++mag) {
        for (std::ptrdiff_t offset : {mag, -mag}) {
            const double err = grid_match_error(intervened, baseline, first, offset, best_err);
            if (err < best_err) {
                best_err = err;
                best_offset = offset;
            }
            if (mag == 0) break;
        }
    }

    ShiftEstimate best{static_cast<double>(best_offset) * h, best_err};
    if (!std::isfinite(best_err)) return best;

    // Golden-section refinement on one grid cell either side.
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = best.delta - h;
    double hi = best.delta + h;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = continuous_match_error(intervened, baseline, first, x1);
    double f2 = continuous_match_error(intervened, baseline, first, x2);
    auto consider = [&](double delta, double err) {
        if (better(err, delta, best.match_error, best.delta)) best = {delta, err};
    };
    consider(x1, f1);
    consider(x2, f2);
    for (int it = 0; it < cfg.refine_iterations; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = continuous_match_error(intervened, baseline, first, x1);
            consider(x1, f1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = continuous_match_error(intervened, baseline, first, x2);
            consider(x2, f2);
        }
    }
    return best;
}

EffectClassification classify_intervention(const ScenarioRun& run, const ClassifierConfig& config) {
    ClassifierConfig cfg = config;
    if (cfg.delta_search_range == 0.0)
        cfg.delta_search_range = (run.intervened.t_end() - run.intervened.t0()) / 2.0;
    validate(cfg);
    if (run.interventions.size() > 1)
        throw UnsupportedScenarioError("classification handles a single intervention only");

    EffectClassification out;
    const Trajectory& baseline = run.baseline;
    const Trajectory& intervened = run.intervened;

    const EquilibriumReport original = fixed_points(run.original_spec());
    const FixedPoint& base_eq = nearest_fixed_point(original, baseline[baseline.size() - 1]);
    out.baseline_settle_time = time_to_equilibrium(baseline, base_eq.v, cfg.epsilon_eq);

    if (run.interventions.empty()) {
        out.verdict = Verdict::dynamic_null;
        out.null_type = NullType::coincident;
        out.delta = 0.0;
        out.residual = dynamics_residual(run.original_spec(), intervened, intervened.t0());
        out.intervened_settle_time = out.baseline_settle_time;
        if (out.baseline_settle_time) out.equilibria = std::pair{base_eq.v, base_eq.v};
        out.shift = ShiftEstimate{0.0, 0.0};
        out.shift_matched = true;
        return out;
    }

    const double t_star = run.interventions.front().time;
    const double excluded[] = {t_star};
    out.residual = dynamics_residual(run.original_spec(), intervened, t_star, excluded);

    const EquilibriumReport final_report = fixed_points(run.final_spec());
    const FixedPoint& int_eq = nearest_fixed_point(final_report, intervened[intervened.size() - 1]);
    out.intervened_settle_time = time_to_equilibrium(intervened, int_eq.v, cfg.epsilon_eq);
    const bool settled = out.baseline_settle_time && out.intervened_settle_time;
    if (settled) out.equilibria = std::pair{base_eq.v, int_eq.v};

    if (out.residual > cfg.residual_tol) {
        out.verdict = Verdict::dynamic_non_null;
        return out;
    }
    if (!settled) {
        out.verdict = Verdict::inconclusive;
        return out;
    }

    out.verdict = Verdict::dynamic_null;
    if (sup_distance(base_eq.v, int_eq.v) > cfg.epsilon_eq) {
        out.null_type = NullType::c_different_equilibrium;
        return out;
    }

    out.shift = estimate_shift(run, t_star, cfg);
    out.shift_matched = out.shift->match_error <= cfg.match_tol;
    // Without a pure shift, the post-intervention state is a fresh start
    // of the original dynamics; compare when each run settles instead.
    out.delta = out.shift_matched ? out.shift->delta
                                  : *out.intervened_settle_time - *out.baseline_settle_time;
    out.null_type = label_shift(*out.delta, cfg.delta_tol);
    return out;
}

std::optional<double> faithfulness_horizon(const ScenarioRun& run, double epsilon) {
    if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be > 0");
    const Trajectory& a = run.intervened;
    const Trajectory& b = run.baseline;
    const std::size_t start =
        run.interventions.empty() ? 0 : grid_index_or_throw(a, run.interventions.front().time, "intervention time");

    std::size_t k = a.size();
    while (k > start && sup_distance(a[k - 1], b[k - 1]) <= epsilon) --k;
    if (k == a.size()) return std::nullopt;
    return a.time_at(k);
}

}  // namespace dynnull
