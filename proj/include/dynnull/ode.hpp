#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dynnull/system.hpp"

namespace dynnull {

inline constexpr double kDefaultStep = 0.01;

/// Undershoot in [-kClampTolerance, 0) is clamped to zero; anything below
/// is an integration-domain error.
inline constexpr double kClampTolerance = 1e-9;

/// Sampled solution on the uniform grid t0 + k * step, k = 0..N.
/// Storage is flat row-major: one row of n volumes per sample.
class Trajectory {
public:
    /// Throws ArgumentError unless step > 0, at least 2 samples, rows of
    /// equal width and all volumes >= 0.
    Trajectory(double t0, double step, std::size_t species, std::vector<double> flat);

    double t0() const noexcept { return t0_; }
    double step() const noexcept { return step_; }
    double t_end() const noexcept { return time_at(size() - 1); }
    std::size_t size() const noexcept { return flat_.size() / species_; }
    std::size_t species() const noexcept { return species_; }

    double time_at(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * step_; }
    std::span<const double> operator[](std::size_t k) const {
        return {flat_.data() + k * species_, species_};
    }
    Volumes sample(std::size_t k) const;

    /// Grid index whose time is within `tol` of t, if any.
    std::optional<std::size_t> grid_index(double t, double tol) const;

    const std::vector<double>& flat() const noexcept { return flat_; }

    bool operator==(const Trajectory&) const = default;

private:
    double t0_;
    double step_;
    std::size_t species_;
    std::vector<double> flat_;
};

/// Number of grid steps covering `horizon` at spacing `step`. Tolerates
/// horizon/step landing a few ulps under an integer.
std::size_t step_count(double horizon, double step);

/// Classic fixed-step RK4 with the nonnegativity clamp. Holds scratch
/// buffers so stepping does not allocate.
class Rk4Stepper {
public:
    explicit Rk4Stepper(std::size_t n);

    /// Advances x by one step of size h under `spec`.
    /// Throws IntegrationDomainError if any stage dips below the clamp.
    void step(const SystemSpec& spec, std::span<double> x, double h);

private:
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

/// Integrates from `init` over `horizon`. Deterministic: identical inputs
/// give bit-identical output.
Trajectory simulate(const SystemSpec& spec, const State& init, double horizon,
                    double step = kDefaultStep);

/// Linear interpolation between bracketing grid samples; exact on grid.
/// Throws OutOfRangeError outside [t0, t_end].
Volumes state_at(const Trajectory& traj, double t);

/// K V0 e^{rt} / (K + V0 (e^{rt} - 1)).
double logistic_closed_form(double r, double capacity, double v0, double t);

}  // namespace dynnull
