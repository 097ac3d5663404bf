#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dynnull/errors.hpp"
#include "dynnull/ode.hpp"
#include "fixtures.hpp"

using namespace dynnull;
using namespace dynnull::testing;

namespace {

double max_logistic_error(double step, double horizon) {
    const auto traj = simulate(isolated_target_spec(), {0.0, {0.25}}, horizon, step);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k)
        worst = std::max(worst, std::abs(traj[k][0] - logistic_closed_form(0.16, 0.85, 0.25, traj.time_at(k))));
    return worst;
}

}  // namespace

TEST_CASE("vector field at extinction is zero") {
    const auto f = vector_field(figure1_spec(), std::vector{0.0, 0.0});
    CHECK(f[0] == 0.0);
    CHECK(f[1] == 0.0);
}

TEST_CASE("carrying capacity is a fixed point of the logistic equation") {
    const auto f = vector_field(isolated_target_spec(), std::vector{0.85});
    CHECK(f[0] == 0.0);
}

TEST_CASE("vector field matches hand substitution on the published spec") {
    // 0.16 * 0.25 * (1 - (0.25 + 0.3 * 0.05) / 0.85) and
    // 0.45 * 0.05 * (1 - (0.05 - 0.35 * 0.25) / 0.8), exact rationals.
    const auto f = vector_field(figure1_spec(), std::vector{0.25, 0.05});
    CHECK(f[0] == doctest::Approx(0.027529411764705882).epsilon(1e-14));
    CHECK(f[1] == doctest::Approx(0.0235546875).epsilon(1e-14));
}

TEST_CASE("vector field rejects a wrong-length state") {
    CHECK_THROWS_AS(vector_field(figure1_spec(), std::vector{0.1}), ArgumentError);
}

TEST_CASE("interaction diagonal cannot be assigned") {
    SystemSpec spec = figure1_spec();
    CHECK_THROWS_AS(spec.gamma.set(0, 0, 2.0), ArgumentError);
    CHECK(spec.gamma(0, 0) == 1.0);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(make_spec({}, {}, {}), ArgumentError);
    CHECK_THROWS_AS(make_spec({"a"}, {-0.1}, {1.0}), ArgumentError);
    CHECK_THROWS_AS(make_spec({"a"}, {0.1}, {0.0}), ArgumentError);
    CHECK_THROWS_AS(make_spec({"a", "a"}, {0.1, 0.1}, {1.0, 1.0}), ArgumentError);
}

TEST_CASE("zero growth rates leave the initial state untouched") {
    const auto spec = make_spec({"a", "b"}, {0.0, 0.0}, {1.0, 1.0});
    const auto traj = simulate(spec, {0.0, {0.3, 0.7}}, 10.0, 0.1);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        CHECK(traj[k][0] == 0.3);
        CHECK(traj[k][1] == 0.7);
    }
}

TEST_CASE("simulate tracks the logistic closed form to 1e-6") {
    CHECK(max_logistic_error(0.01, 100.0) <= 1e-6);
}

TEST_CASE("halving the step cuts the error by at least 8") {
    // Coarse steps keep truncation well above round-off.
    for (double h : {0.8, 0.4, 0.2}) {
        const double coarse = max_logistic_error(h, 100.0);
        const double fine = max_logistic_error(h / 2, 100.0);
        CAPTURE(h);
        CHECK(coarse / fine >= 8.0);
    }
}

TEST_CASE("grid and sample count") {
    const auto traj = simulate(isolated_target_spec(), {2.0, {0.25}}, 1.0, 0.1);
    CHECK(traj.size() == 11);
    CHECK(traj.t0() == 2.0);
    CHECK(traj.time_at(10) == doctest::Approx(3.0));
    CHECK(step_count(0.3, 0.1) == 3);
    CHECK(step_count(0.35, 0.1) == 3);
}

TEST_CASE("simulate preconditions") {
    const auto spec = isolated_target_spec();
    CHECK_THROWS_AS(simulate(spec, {0.0, {0.25}}, 0.0, 0.01), ArgumentError);
    CHECK_THROWS_AS(simulate(spec, {0.0, {0.25}}, 1.0, 0.0), ArgumentError);
    CHECK_THROWS_AS(simulate(spec, {0.0, {0.25}}, 0.005, 0.01), ArgumentError);
    CHECK_THROWS_AS(simulate(spec, {0.0, {-0.1}}, 1.0, 0.01), ArgumentError);
    CHECK_THROWS_AS(simulate(spec, {0.0, {0.1, 0.2}}, 1.0, 0.01), ArgumentError);
}

TEST_CASE("overshoot below zero is an integration-domain error") {
    // r*h = 10: RK4 overshoots the capacity and then dives negative.
    const auto spec = make_spec({"a"}, {1000.0}, {1.0});
    CHECK_THROWS_AS(simulate(spec, {0.0, {0.5}}, 1.0, 0.01), IntegrationDomainError);
}

TEST_CASE("published spec settles on the interior fixed point") {
    const auto traj = simulate(figure1_spec(), figure1_init(), 500.0, 0.01);
    // Solve v_t + 0.30 v_p = 0.85, v_p - 0.35 v_t = 0.80 by hand.
    const double vt = 0.61 / 1.105;
    const double vp = 0.80 + 0.35 * vt;
    CHECK(std::abs(traj[traj.size() - 1][0] - vt) <= 1e-3);
    CHECK(std::abs(traj[traj.size() - 1][1] - vp) <= 1e-3);
}

TEST_CASE("simulate is bit-for-bit deterministic") {
    const auto a = simulate(figure1_spec(), figure1_init(), 50.0, 0.01);
    const auto b = simulate(figure1_spec(), figure1_init(), 50.0, 0.01);
    CHECK(a == b);
}

TEST_CASE("state_at interpolates linearly and is exact on the grid") {
    const auto spec = make_spec({"a"}, {0.0}, {1.0});
    const Trajectory traj(0.0, 0.5, 1, {1.0, 2.0, 4.0});
    CHECK(state_at(traj, 0.0)[0] == 1.0);
    CHECK(state_at(traj, 0.75)[0] == doctest::Approx(3.0));
    CHECK(state_at(traj, 1.0)[0] == 4.0);
    CHECK(state_at(traj, 0.5)[0] == 2.0);
    CHECK_THROWS_AS(state_at(traj, -0.1), OutOfRangeError);
    CHECK_THROWS_AS(state_at(traj, 1.01), OutOfRangeError);

    const auto flat = simulate(spec, {0.0, {0.4}}, 1.0, 0.1);
    for (double t : {0.0, 0.13, 0.5, 0.99, 1.0}) CHECK(state_at(flat, t)[0] == 0.4);
}

TEST_CASE("trajectory invariants are enforced") {
    CHECK_THROWS_AS(Trajectory(0.0, 0.1, 1, {1.0}), ArgumentError);
    CHECK_THROWS_AS(Trajectory(0.0, 0.0, 1, {1.0, 1.0}), ArgumentError);
    CHECK_THROWS_AS(Trajectory(0.0, 0.1, 1, {1.0, -1.0}), ArgumentError);
    CHECK_THROWS_AS(Trajectory(0.0, 0.1, 2, {1.0, 1.0, 1.0}), ArgumentError);
}

TEST_CASE("logistic closed form") {
    CHECK(logistic_closed_form(0.16, 0.85, 0.85, 37.0) == doctest::Approx(0.85));
    CHECK(logistic_closed_form(0.16, 0.85, 0.25, 0.0) == 0.25);
    // mpmath at 30 digits: 0.572563442909363035...
    CHECK(logistic_closed_form(0.16, 0.85, 0.25, 10.0) == doctest::Approx(0.5725634429093630).epsilon(1e-14));
    CHECK_THROWS_AS(logistic_closed_form(0.16, 0.0, 0.25, 1.0), ArgumentError);
}

// Properties

TEST_CASE("fixed points stay put") {
    // Exact zeros of the field: extinction and the isolated capacity.
    {
        const auto traj = simulate(figure1_spec(), {0.0, {0.0, 0.0}}, 200.0, 0.01);
        for (std::size_t k = 0; k < traj.size(); ++k) CHECK(sup_distance(traj[k], std::vector{0.0, 0.0}) <= 1e-9);
    }
    {
        const auto traj = simulate(isolated_target_spec(), {0.0, {0.85}}, 200.0, 0.01);
        for (std::size_t k = 0; k < traj.size(); ++k) CHECK(std::abs(traj[k][0] - 0.85) <= 1e-9);
    }
    // Stable interior point of the published spec.
    const double vt = 0.61 / 1.105;
    const std::vector<double> star{vt, 0.80 + 0.35 * vt};
    const auto traj = simulate(figure1_spec(), {0.0, star}, 200.0, 0.01);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) worst = std::max(worst, sup_distance(traj[k], star));
    CHECK(worst <= 1e-9);
}

TEST_CASE("autonomy: restarting mid-trajectory reproduces the tail") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> when(0.0, 40.0);
    std::uniform_real_distribution<double> span(1.0, 20.0);
    const auto traj = simulate(figure1_spec(), figure1_init(), 60.0, 0.01);
    for (int trial = 0; trial < 20; ++trial) {
        // Grid-aligned restart so the comparison is sample to sample.
        const double s = std::round(when(rng) * 100.0) / 100.0;
        const double d = std::round(span(rng) * 100.0) / 100.0;
        const auto start = *traj.grid_index(s, 1e-9);
        const auto tail = simulate(figure1_spec(), {s, traj.sample(start)}, d, 0.01);
        double worst = 0.0;
        for (std::size_t k = 0; k < tail.size(); ++k) worst = std::max(worst, sup_distance(tail[k], traj[start + k]));
        CAPTURE(s);
        CHECK(worst <= 1e-7);
    }
}

TEST_CASE("logistic growth from below capacity is strictly increasing and bounded") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> frac(0.01, 0.99);
    std::uniform_real_distribution<double> rate(0.05, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double k = 0.85;
        const double r = rate(rng);
        const auto traj = simulate(make_spec({"a"}, {r}, {k}), {0.0, {frac(rng) * k}}, 30.0, 0.01);
        for (std::size_t i = 1; i < traj.size(); ++i) {
            REQUIRE(traj[i][0] > traj[i - 1][0]);
            REQUIRE(traj[i][0] <= k + 1e-9);
        }
    }
}

TEST_CASE("relabelling species permutes the trajectory") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> vol(0.01, 0.8);
    for (int trial = 0; trial < 10; ++trial) {
        const SystemSpec spec = random_spec(rng, 3);
        const std::vector<std::size_t> perm{2, 0, 1};  // new index p holds old perm[p]
        std::vector<std::string> names;
        std::vector<double> r, k;
        for (auto p : perm) {
            names.push_back(spec.species_names[p]);
            r.push_back(spec.growth_rate[p]);
            k.push_back(spec.capacity[p]);
        }
        SystemSpec permuted = make_spec(names, r, k);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b)
                if (a != b) permuted.gamma.set(a, b, spec.gamma(perm[a], perm[b]));

        const Volumes init{vol(rng), vol(rng), vol(rng)};
        const Volumes pinit{init[perm[0]], init[perm[1]], init[perm[2]]};
        const auto a = simulate(spec, {0.0, init}, 20.0, 0.01);
        const auto b = simulate(permuted, {0.0, pinit}, 20.0, 0.01);
        double worst = 0.0;
        for (std::size_t s = 0; s < a.size(); ++s)
            for (std::size_t p = 0; p < 3; ++p) worst = std::max(worst, std::abs(b[s][p] - a[s][perm[p]]));
        CHECK(worst <= 1e-12);
    }
}
