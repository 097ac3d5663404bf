#include <doctest.h>

#include <filesystem>

#include "dynnull/errors.hpp"
#include "dynnull/scenario_io.hpp"
#include "fixtures.hpp"

using namespace dynnull;
using namespace dynnull::testing;

namespace {

constexpr const char* kMinimal = R"({
  "schema_version": 1,
  "system": {"species": [{"name": "x", "r": 0.2, "K": 1.0}]},
  "init": {"x": 0.1},
  "horizon": 5
})";

constexpr const char* kTwo = R"({
  "schema_version": 1,
  "system": {
    "species": [{"name": "target", "r": 0.16, "K": 0.85}, {"name": "proxy", "r": 0.45, "K": 0.8}],
    "gamma": [GAMMA]
  },
  "init": {"target": 0.25, "proxy": 0.05},
  "horizon": 50,
  "interventions": [INTERVENTIONS]
})";

std::string two(const std::string& gamma, const std::string& interventions = "") {
    std::string s = kTwo;
    s.replace(s.find("GAMMA"), 5, gamma);
    s.replace(s.find("INTERVENTIONS"), 13, interventions);
    return s;
}

std::string field_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "<accepted>";
}

}  // namespace

TEST_CASE("minimal file gets defaults") {
    const auto doc = parse_scenario(kMinimal);
    CHECK(doc.scenario.spec.size() == 1);
    CHECK(doc.scenario.step == 0.01);
    CHECK(doc.scenario.interventions.empty());
    CHECK(doc.scenario.init.t == 0.0);
    CHECK(doc.scenario.init.v == Volumes{0.1});
    CHECK_FALSE(doc.measure_times.has_value());
    CHECK(doc.classifier == ClassifierOverrides{});

    const auto cfg = resolve_classifier(doc);
    CHECK(cfg.delta_tol == doctest::Approx(0.02));
    CHECK(cfg.delta_search_range == doctest::Approx(2.5));
    const auto times = resolve_measure_times(doc);
    CHECK(times.size() == 11);
    CHECK(times.front() == 0.0);
    CHECK(times.back() == doctest::Approx(5.0));
}

TEST_CASE("shipped coupled model parses to the published parameters") {
    const auto doc = paper_scenario("figure1");
    CHECK(doc.scenario.spec == figure1_spec());
    CHECK(doc.scenario.init.v == figure1_init().v);
    const auto traj = simulate(doc.scenario.spec, doc.scenario.init, 500.0, doc.scenario.step);
    const Volumes interior{0.61 / 1.105, 0.8 + 0.35 * 0.61 / 1.105};
    CHECK(sup_distance(traj.sample(traj.size() - 1), interior) <= 1e-3);
}

TEST_CASE("every shipped scenario parses and round-trips") {
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(paper_scenarios())) {
        if (entry.path().extension() != ".json") continue;
        ++count;
        CAPTURE(entry.path().string());
        const auto doc = load_scenario(entry.path());
        const auto text = emit_scenario(doc);
        CHECK(parse_scenario(text) == doc);
        CHECK(emit_scenario(parse_scenario(text)) == text);
    }
    CHECK(count == 6);
}

TEST_CASE("gamma entries") {
    const auto doc = parse_scenario(two(R"({"from": "target", "to": "proxy", "value": 0.3})"));
    CHECK(doc.scenario.spec.gamma(0, 1) == 0.3);
    CHECK(doc.scenario.spec.gamma(1, 0) == 0.0);

    CHECK(field_of(two(R"({"from": "proxy", "to": "proxy", "value": 0.3})")).find("gamma") != std::string::npos);
    CHECK(field_of(two(R"({"from": "target", "to": "ghost", "value": 0.3})")).find("gamma") != std::string::npos);
    CHECK(field_of(two(R"({"from": "target", "to": "proxy", "value": 0.3},
                          {"from": "target", "to": "proxy", "value": 0.4})")) != "<accepted>");
}

TEST_CASE("intervention entries") {
    const auto doc = parse_scenario(two("", R"({"time": 20, "action": "set_param", "target": "gamma:target->proxy", "value": 0.6},
                                               {"time": 30, "action": "set_state", "target": "proxy", "value": 0.05},
                                               {"time": 40, "action": "scale_state", "target": "target", "value": 0.5},
                                               {"time": 45, "action": "set_param", "target": "K:proxy", "value": 0.2},
                                               {"time": 48, "action": "set_param", "target": "r:target", "value": 0.1})"));
    const auto& iv = doc.scenario.interventions;
    REQUIRE(iv.size() == 5);
    CHECK(iv[0].action == Action{SetParam{ParamTarget::interaction(0, 1), 0.6}});
    CHECK(iv[1].action == Action{SetState{1, 0.05}});
    CHECK(iv[2].action == Action{ScaleState{0, 0.5}});
    CHECK(iv[3].action == Action{SetParam{ParamTarget::capacity(1), 0.2}});
    CHECK(iv[4].action == Action{SetParam{ParamTarget::growth_rate(0), 0.1}});
    CHECK(format_param_target(ParamTarget::interaction(0, 1), doc.scenario.spec) == "gamma:target->proxy");

    CHECK(field_of(two("", R"({"time": 20, "action": "set_state", "target": "ghost", "value": 0.1})")) != "<accepted>");
    CHECK(field_of(two("", R"({"time": 20, "action": "jump", "target": "proxy", "value": 0.1})")) != "<accepted>");
    CHECK(field_of(two("", R"({"time": 20, "action": "set_param", "target": "gamma:proxy->proxy", "value": 0.1})")) !=
          "<accepted>");
    CHECK(field_of(two("", R"({"time": 20, "action": "set_param", "target": "Q:proxy", "value": 0.1})")) != "<accepted>");
    CHECK(field_of(two("", R"({"time": 20, "action": "set_state", "target": "proxy", "value": 0.1},
                              {"time": 20, "action": "set_state", "target": "target", "value": 0.1})")) ==
          "interventions");
    CHECK(field_of(two("", R"({"time": 80, "action": "set_state", "target": "proxy", "value": 0.1})")) ==
          "interventions");
}

TEST_CASE("unknown keys are rejected at every level") {
    std::string top = kMinimal;
    top.insert(1, R"("colour": "blue",)");
    CHECK(field_of(top) == "colour");

    std::string nested = kMinimal;
    nested.replace(nested.find(R"("K": 1.0)"), 8, R"("K": 1.0, "mass": 3)");
    CHECK(field_of(nested).find("mass") != std::string::npos);
}

TEST_CASE("malformed JSON reports line and column") {
    const std::string bad = "{\n  \"schema_version\": 1,\n  \"system\": [\n}";
    try {
        parse_scenario(bad);
        FAIL("accepted malformed JSON");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
        CHECK(e.column() >= 1);
    }
}

TEST_CASE("non-finite and out-of-range numbers") {
    std::string huge = kMinimal;
    huge.replace(huge.find("0.2"), 3, "1e400");
    CHECK(field_of(huge) == "system.species[0].r");

    std::string negative = kMinimal;
    negative.replace(negative.find("\"x\": 0.1"), 8, "\"x\": -0.1");
    CHECK(field_of(negative) == "init.x");

    std::string zero_k = kMinimal;
    zero_k.replace(zero_k.find("1.0"), 3, "0");
    CHECK(field_of(zero_k).find(".K") != std::string::npos);
}

TEST_CASE("missing and mistyped fields") {
    CHECK(field_of(R"({"schema_version": 2, "system": {"species": [{"name": "x", "r": 0.2, "K": 1.0}]},
                      "init": {"x": 0.1}, "horizon": 5})") == "schema_version");
    CHECK(field_of(R"({"schema_version": 1, "system": {"species": [{"name": "x", "r": 0.2, "K": 1.0}]},
                      "init": {}, "horizon": 5})") == "init.x");
    CHECK(field_of(R"({"schema_version": 1, "system": {"species": [{"name": "x", "r": 0.2, "K": 1.0}]},
                      "init": {"x": 0.1, "y": 0.2}, "horizon": 5})") != "<accepted>");
    CHECK(field_of(R"({"schema_version": 1, "system": {"species": [{"name": "x", "r": 0.2, "K": 1.0}]},
                      "init": {"x": 0.1}, "horizon": "long"})") == "horizon");
    CHECK(field_of(R"({"schema_version": 1, "system": {"species": []}, "init": {}, "horizon": 5})") ==
          "system.species");
}

TEST_CASE("round trip preserves classifier overrides and measurement times") {
    std::string text = kMinimal;
    text.insert(text.rfind('}'), R"(, "classifier": {"epsilon_eq": 0.05, "refine_iterations": 12}, "measure_times": [0, 1, 2.5])");
    const auto doc = parse_scenario(text);
    CHECK(doc.classifier.epsilon_eq == 0.05);
    CHECK(doc.classifier.refine_iterations == 12);
    CHECK(resolve_classifier(doc).epsilon_eq == 0.05);
    CHECK(resolve_measure_times(doc) == std::vector<double>{0, 1, 2.5});
    CHECK(parse_scenario(emit_scenario(doc)) == doc);

    std::string bad = kMinimal;
    bad.insert(bad.rfind('}'), R"(, "classifier": {"epsilon_eq": -1})");
    CHECK(field_of(bad).find("classifier") != std::string::npos);
}

TEST_CASE("exact values survive emission") {
    const auto doc = paper_scenario("section31");
    const auto& iv = doc.scenario.interventions.front();
    CHECK(std::get<ScaleState>(iv.action).factor == kExactBeta);
    CHECK(parse_scenario(emit_scenario(doc)).scenario.interventions.front() == iv);
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ValidationError);
}
