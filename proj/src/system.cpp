#include "dynnull/system.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dynnull/errors.hpp"

namespace dynnull {

InteractionMatrix::InteractionMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {
    for (std::size_t i = 0; i < n; ++i) data_[i * n + i] = 1.0;
}

void InteractionMatrix::set(std::size_t i, std::size_t j, double value) {
    if (i >= n_ || j >= n_) throw ArgumentError("interaction index out of range");
    if (i == j) throw ArgumentError("interaction diagonal is fixed at 1");
    data_[i * n_ + j] = value;
}

std::size_t SystemSpec::index_of(const std::string& name) const {
    auto it = std::find(species_names.begin(), species_names.end(), name);
    if (it == species_names.end()) throw ArgumentError("unknown species '" + name + "'");
    return static_cast<std::size_t>(it - species_names.begin());
}

SystemSpec make_spec(std::vector<std::string> names, std::vector<double> growth_rate,
                     std::vector<double> capacity) {
    SystemSpec spec;
    spec.gamma = InteractionMatrix(names.size());
    spec.species_names = std::move(names);
    spec.growth_rate = std::move(growth_rate);
    spec.capacity = std::move(capacity);
    validate(spec);
    return spec;
}

void validate(const SystemSpec& spec) {
    const std::size_t n = spec.size();
    if (n == 0) throw ArgumentError("system needs at least one species");
    if (spec.growth_rate.size() != n || spec.capacity.size() != n || spec.gamma.size() != n)
        throw ArgumentError("parameter vectors do not match species count");

    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& name = spec.species_names[i];
        if (name.empty()) throw ArgumentError("empty species name");
        if (!seen.insert(name).second) throw ArgumentError("duplicate species name '" + name + "'");
        const double r = spec.growth_rate[i];
        const double k = spec.capacity[i];
        if (!std::isfinite(r) || r < 0.0) throw ArgumentError("r of '" + name + "' must be >= 0");
        if (!std::isfinite(k) || k <= 0.0) throw ArgumentError("K of '" + name + "' must be > 0");
        for (std::size_t j = 0; j < n; ++j)
            if (!std::isfinite(spec.gamma(i, j))) throw ArgumentError("gamma must be finite");
    }
}

void vector_field_into(const SystemSpec& spec, std::span<const double> v, std::span<double> out) {
    const std::size_t n = spec.size();
    for (std::size_t i = 0; i < n; ++i) {
        double load = v[i];
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) load += spec.gamma(i, j) * v[j];
        out[i] = spec.growth_rate[i] * v[i] * (1.0 - load / spec.capacity[i]);
    }
}

Volumes vector_field(const SystemSpec& spec, std::span<const double> v) {
    if (v.size() != spec.size())
        throw ArgumentError("state has " + std::to_string(v.size()) + " components, system has " +
                            std::to_string(spec.size()));
    Volumes out(v.size());
    vector_field_into(spec, v, out);
    return out;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace dynnull
