#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dynnull {

using Volumes = std::vector<double>;

/// Square matrix of cross-species interaction coefficients, row-major.
/// Entry (i, j) is the weight of species j inside species i's growth
/// equation. The diagonal is fixed at 1 and cannot be assigned.
class InteractionMatrix {
public:
    InteractionMatrix() = default;
    explicit InteractionMatrix(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    /// Throws ArgumentError for i == j or out-of-range indices.
    void set(std::size_t i, std::size_t j, double value);

    bool operator==(const InteractionMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Parameters of an n-species generalized Lotka-Volterra system:
///
///   dV_i/dt = r_i V_i (1 - (V_i + sum_{j != i} gamma(i, j) V_j) / K_i)
///
/// For the two-species tumour model, index 0 is the target population
/// and index 1 the proxy, so gamma(0, 1) is the proxy's weight in the
/// target equation.
struct SystemSpec {
    std::vector<std::string> species_names;
    std::vector<double> growth_rate;  // r, 1/time
    std::vector<double> capacity;     // K, volume
    InteractionMatrix gamma;

    std::size_t size() const noexcept { return species_names.size(); }
    std::size_t index_of(const std::string& name) const;  // throws ArgumentError

    bool operator==(const SystemSpec&) const = default;
};

/// Builds a spec with zero interactions.
SystemSpec make_spec(std::vector<std::string> names, std::vector<double> growth_rate,
                     std::vector<double> capacity);

/// Checks n >= 1, K_i > 0, r_i >= 0, finite gamma, unique names.
/// Throws ArgumentError naming the first violation.
void validate(const SystemSpec& spec);

struct State {
    double t = 0.0;
    Volumes v;

    bool operator==(const State&) const = default;
};

/// Right-hand side of the system at volumes `v`.
Volumes vector_field(const SystemSpec& spec, std::span<const double> v);

/// Allocation-free variant used by the integrator. `out` must have size n.
void vector_field_into(const SystemSpec& spec, std::span<const double> v, std::span<double> out);

double sup_distance(std::span<const double> a, std::span<const double> b);

}  // namespace dynnull
