#include "dynnull/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynnull/errors.hpp"

namespace dynnull {

Trajectory::Trajectory(double t0, double step, std::size_t species, std::vector<double> flat)
    : t0_(t0), step_(step), species_(species), flat_(std::move(flat)) {
    if (!std::isfinite(t0)) throw ArgumentError("trajectory start time must be finite");
    if (!(step > 0.0) || !std::isfinite(step)) throw ArgumentError("trajectory step must be > 0");
    if (species == 0 || flat_.size() % species != 0)
        throw ArgumentError("trajectory storage is not a whole number of samples");
    if (size() < 2) throw ArgumentError("trajectory needs at least 2 samples");
    for (double x : flat_)
        if (!(x >= 0.0)) throw ArgumentError("trajectory volumes must be nonnegative");
}

Volumes Trajectory::sample(std::size_t k) const {
    auto row = (*this)[k];
    return {row.begin(), row.end()};
}

std::optional<std::size_t> Trajectory::grid_index(double t, double tol) const {
    const double pos = (t - t0_) / step_;
    const double k = std::round(pos);
    if (k < 0.0 || k > static_cast<double>(size() - 1)) return std::nullopt;
    const auto idx = static_cast<std::size_t>(k);
    if (std::abs(time_at(idx) - t) > tol) return std::nullopt;
    return idx;
}

std::size_t step_count(double horizon, double step) {
    const double ratio = horizon / step;
    return static_cast<std::size_t>(std::floor(ratio + 1e-9 * std::max(1.0, ratio)));
}

Rk4Stepper::Rk4Stepper(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

namespace {

void check_domain(std::span<const double> x) {
    for (double v : x) {
        if (!(v >= -kClampTolerance))
            throw IntegrationDomainError("volume " + std::to_string(v) +
                                         " below zero during integration");
    }
}

}  // namespace

void Rk4Stepper::step(const SystemSpec& spec, std::span<double> x, double h) {
    const std::size_t n = x.size();
    const double half = 0.5 * h;

    vector_field_into(spec, x, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + half * k1_[i];
    check_domain(tmp_);

    vector_field_into(spec, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + half * k2_[i];
    check_domain(tmp_);

    vector_field_into(spec, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + h * k3_[i];
    check_domain(tmp_);

    vector_field_into(spec, tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i)
        x[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    check_domain(x);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::max(x[i], 0.0);
}

Trajectory simulate(const SystemSpec& spec, const State& init, double horizon, double step) {
    validate(spec);
    const std::size_t n = spec.size();
    if (init.v.size() != n) throw ArgumentError("initial state does not match species count");
    for (double v : init.v)
        if (!(v >= 0.0)) throw ArgumentError("initial volumes must be nonnegative");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ArgumentError("horizon must be > 0");
    if (!(step > 0.0) || !std::isfinite(step)) throw ArgumentError("step must be > 0");
    const std::size_t steps = step_count(horizon, step);
    if (steps < 1) throw ArgumentError("horizon shorter than one step");

    std::vector<double> flat;
    flat.reserve((steps + 1) * n);
    flat.insert(flat.end(), init.v.begin(), init.v.end());

    Rk4Stepper stepper(n);
    Volumes x = init.v;
    for (std::size_t k = 0; k < steps; ++k) {
        stepper.step(spec, x, step);
        flat.insert(flat.end(), x.begin(), x.end());
    }
    return Trajectory(init.t, step, n, std::move(flat));
}

Volumes state_at(const Trajectory& traj, double t) {
    if (!(t >= traj.t0()) || !(t <= traj.t_end()))
        throw OutOfRangeError("time " + std::to_string(t) + " outside trajectory span [" +
                              std::to_string(traj.t0()) + ", " + std::to_string(traj.t_end()) +
                              "]");
    double pos = (t - traj.t0()) / traj.step();
    if (std::abs(pos - std::round(pos)) < 1e-9) pos = std::round(pos);
    const std::size_t last = traj.size() - 1;
    auto lo = std::min(static_cast<std::size_t>(std::floor(pos)), last);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0 || lo == last) return traj.sample(lo);

    auto a = traj[lo];
    auto b = traj[lo + 1];
    Volumes out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + frac * (b[i] - a[i]);
    return out;
}

double logistic_closed_form(double r, double capacity, double v0, double t) {
    if (!(capacity > 0.0) || !(v0 >= 0.0))
        throw ArgumentError("logistic needs K > 0 and V0 >= 0");
    const double growth = std::exp(r * t);
    return capacity * v0 * growth / (capacity + v0 * (growth - 1.0));
}

}  // namespace dynnull
