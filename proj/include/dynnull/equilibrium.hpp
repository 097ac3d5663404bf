#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dynnull/ode.hpp"
#include "dynnull/system.hpp"

namespace dynnull {

enum class Stability { stable, unstable, saddle, nonhyperbolic };

std::string_view to_string(Stability s);

/// Real parts within this band of zero make a point nonhyperbolic.
inline constexpr double kHyperbolicityThreshold = 1e-9;
/// Support enumeration is 2^n linear solves.
inline constexpr std::size_t kMaxEnumerationSpecies = 12;

struct FixedPoint {
    Volumes v;
    std::vector<std::size_t> support;  // species with v_i > 0, ascending
    Stability stability = Stability::nonhyperbolic;
    std::vector<std::complex<double>> eigenvalues;
};

struct EquilibriumReport {
    SystemSpec spec;
    std::vector<FixedPoint> points;  // origin first
    bool degenerate = false;         // some support subsystem was singular
};

/// Row-major n x n matrix.
struct Matrix {
    std::size_t n = 0;
    std::vector<double> data;

    double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
};

/// Analytic Jacobian of the vector field. Throws ArgumentError on a
/// dimension mismatch.
Matrix jacobian(const SystemSpec& spec, std::span<const double> v);

/// Closed form for n <= 2, general eigen-solver otherwise.
std::vector<std::complex<double>> eigenvalues(const Matrix& m);

Stability classify_stability(std::span<const std::complex<double>> eigenvalues);

/// All nonnegative fixed points by enumerating support subsets. Throws
/// SizeError for n > kMaxEnumerationSpecies.
EquilibriumReport fixed_points(const SystemSpec& spec);

/// Earliest grid time T such that every sample from T to the end lies in
/// the sup-norm ball of radius epsilon around `target`. Returns nothing
/// when the final 10% of the horizon is not entirely inside the ball.
/// The answer depends on the horizon: callers should integrate for
/// several multiples of the slowest timescale.
std::optional<double> time_to_equilibrium(const Trajectory& traj, std::span<const double> target,
                                          double epsilon);

/// Fixed point of `report` closest (sup norm) to `v`.
const FixedPoint& nearest_fixed_point(const EquilibriumReport& report, std::span<const double> v);

}  // namespace dynnull
