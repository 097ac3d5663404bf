#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "dynnull/intervention.hpp"
#include "dynnull/scenario_io.hpp"
#include "dynnull/system.hpp"

namespace dynnull::testing {

/// Two-species tumour model with the published parameter set.
inline SystemSpec figure1_spec() {
    SystemSpec spec = make_spec({"target", "proxy"}, {0.16, 0.45}, {0.85, 0.80});
    spec.gamma.set(0, 1, 0.30);   // proxy's weight in the target equation
    spec.gamma.set(1, 0, -0.35);  // target's weight in the proxy equation
    return spec;
}

inline SystemSpec isolated_target_spec() { return make_spec({"target"}, {0.16}, {0.85}); }

inline SystemSpec bistable_spec() {
    SystemSpec spec = make_spec({"target", "proxy"}, {0.16, 0.45}, {0.85, 0.80});
    spec.gamma.set(0, 1, 1.5);
    spec.gamma.set(1, 0, 1.5);
    return spec;
}

inline State figure1_init() { return {0.0, {0.25, 0.05}}; }

/// V(0)/V(10) for the isolated target, from the closed form (mpmath,
/// 30 digits: 0.436632836231521464813...).
inline constexpr double kExactBeta = 0.43663283623152146;

inline Scenario section31_scenario() {
    Scenario s;
    s.spec = isolated_target_spec();
    s.init = {0.0, {0.25}};
    s.horizon = 100.0;
    s.step = 0.01;
    s.interventions = {{10.0, ScaleState{0, kExactBeta}}};
    return s;
}

inline std::filesystem::path source_dir() { return DYNNULL_SOURCE_DIR; }
inline std::filesystem::path paper_scenarios() { return source_dir() / "scenarios" / "paper"; }

inline ScenarioDocument paper_scenario(const std::string& stem) {
    return load_scenario(paper_scenarios() / (stem + ".json"));
}

/// Random nonnegative spec with n species, fixed seed per caller.
inline SystemSpec random_spec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> rate(0.05, 0.6);
    std::uniform_real_distribution<double> cap(0.3, 1.5);
    std::uniform_real_distribution<double> inter(-0.5, 0.5);
    std::vector<std::string> names;
    std::vector<double> r, k;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("s" + std::to_string(i));
        r.push_back(rate(rng));
        k.push_back(cap(rng));
    }
    SystemSpec spec = make_spec(names, r, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) spec.gamma.set(i, j, inter(rng));
    return spec;
}

}  // namespace dynnull::testing
